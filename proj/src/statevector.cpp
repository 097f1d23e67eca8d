#include "qcaveat/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "qcaveat/error.hpp"
#include "qcaveat/rng.hpp"

namespace qcaveat {

namespace detail {
struct StateBuilder {
  static QuantumState make(RegisterLayout layout, CVector amplitudes) {
    return QuantumState(std::move(layout), std::move(amplitudes));
  }
};
}  // namespace detail

namespace {

using detail::StateBuilder;

constexpr double kUnitaryTolerance = 1e-10;

Eigen::Index as_index(std::uint64_t i) { return static_cast<Eigen::Index>(i); }

// Calls f(base) for every global index whose bits in `slot` are zero.
template <typename F>
void for_each_base(int num_qubits, const RegisterSlot& slot, F&& f) {
  const std::uint64_t low_count = std::uint64_t{1} << slot.shift;
  const std::uint64_t high_count = std::uint64_t{1} << (num_qubits - slot.shift - slot.width);
  for (std::uint64_t hi = 0; hi < high_count; ++hi) {
    const std::uint64_t high_bits = hi << (slot.shift + slot.width);
    for (std::uint64_t lo = 0; lo < low_count; ++lo) {
      f(high_bits | lo);
    }
  }
}

void require_unitary(const CMatrix& u) {
  const double dev = unitarity_deviation(u);
  if (!(dev <= kUnitaryTolerance)) {
    std::ostringstream msg;
    msg << "operator is not unitary: max |(U^dagger U - I)_ij| = " << dev;
    throw PreconditionError(msg.str());
  }
}

void require_distinct(std::string_view a, std::string_view b) {
  if (a == b) {
    throw PreconditionError("control and target registers must differ: " + std::string(a));
  }
}

}  // namespace

bool operator==(const Register& a, const Register& b) {
  return a.name == b.name && a.width == b.width;
}

bool operator==(const RegisterLayout& a, const RegisterLayout& b) {
  return a.registers_ == b.registers_;
}

RegisterLayout::RegisterLayout(std::initializer_list<Register> registers)
    : RegisterLayout(std::vector<Register>(registers)) {}

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
  std::set<std::string> names;
  for (const auto& r : registers_) {
    if (r.width < 1) {
      throw PreconditionError("register '" + r.name + "' must have width >= 1");
    }
    if (!names.insert(r.name).second) {
      throw PreconditionError("duplicate register name '" + r.name + "'");
    }
    num_qubits_ += r.width;
  }
  if (num_qubits_ > kMaxQubits) {
    std::ostringstream msg;
    msg << "layout needs " << num_qubits_ << " qubits; the simulator cap is " << kMaxQubits;
    throw PreconditionError(msg.str());
  }
}

bool RegisterLayout::contains(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

RegisterSlot RegisterLayout::slot(std::string_view name) const {
  int below = num_qubits_;
  for (const auto& r : registers_) {
    below -= r.width;
    if (r.name == name) return RegisterSlot{below, r.width};
  }
  throw PreconditionError("no register named '" + std::string(name) + "'");
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
  std::vector<Register> all = registers_;
  all.insert(all.end(), other.registers_.begin(), other.registers_.end());
  return RegisterLayout(std::move(all));
}

double ProbabilityTable::total() const {
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  return sum;
}

std::size_t ProbabilityTable::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
}

QuantumState prepare_state(const RegisterLayout& layout, const CVector& amplitudes) {
  if (layout.registers().empty()) {
    throw PreconditionError("layout must contain at least one register");
  }
  if (static_cast<std::uint64_t>(amplitudes.size()) != layout.dim()) {
    std::ostringstream msg;
    msg << "amplitude vector has length " << amplitudes.size() << " but the layout needs "
        << layout.dim();
    throw PreconditionError(msg.str());
  }
  if (!amplitudes.allFinite()) {
    throw PreconditionError("amplitudes must be finite");
  }
  const double norm = amplitudes.norm();
  if (norm == 0.0) {
    throw PreconditionError("cannot prepare the zero vector");
  }
  if (std::abs(norm - 1.0) > kPrepareNormTolerance) {
    std::ostringstream msg;
    msg << "amplitude norm " << norm << " is not within " << kPrepareNormTolerance << " of 1";
    throw PreconditionError(msg.str());
  }
  return StateBuilder::make(layout, amplitudes / norm);
}

QuantumState basis_state(const RegisterLayout& layout, std::uint64_t index) {
  if (index >= layout.dim()) {
    throw PreconditionError("basis index out of range");
  }
  CVector amps = CVector::Zero(as_index(layout.dim()));
  amps(as_index(index)) = 1.0;
  return prepare_state(layout, amps);
}

QuantumState embed_vector(const std::string& name, const CVector& v) {
  if (v.size() < 1 || !(v.norm() > 0.0)) {
    throw PreconditionError("cannot embed an empty or zero vector");
  }
  int width = 1;
  while ((Eigen::Index{1} << width) < v.size()) ++width;
  CVector amps = CVector::Zero(Eigen::Index{1} << width);
  amps.head(v.size()) = v / v.norm();
  return prepare_state(RegisterLayout{{name, width}}, amps);
}

QuantumState tensor_product(const QuantumState& first, const QuantumState& second) {
  RegisterLayout layout = first.layout().concat(second.layout());
  const CVector& a = first.amplitudes();
  const CVector& b = second.amplitudes();
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return StateBuilder::make(std::move(layout), std::move(out));
}

QuantumState apply_register_operator(const QuantumState& state, std::string_view reg,
                                     const CMatrix& op) {
  const RegisterSlot slot = state.layout().slot(reg);
  if (static_cast<std::uint64_t>(op.rows()) != slot.dim() || op.rows() != op.cols()) {
    throw PreconditionError("operator dimension does not match register '" + std::string(reg) +
                            "'");
  }
  CVector out = state.amplitudes();
  CVector local(as_index(slot.dim()));
  for_each_base(state.num_qubits(), slot, [&](std::uint64_t base) {
    for (std::uint64_t v = 0; v < slot.dim(); ++v) {
      local(as_index(v)) = out(as_index(base | (v << slot.shift)));
    }
    const CVector mapped = op * local;
    for (std::uint64_t v = 0; v < slot.dim(); ++v) {
      out(as_index(base | (v << slot.shift))) = mapped(as_index(v));
    }
  });
  return StateBuilder::make(state.layout(), std::move(out));
}

QuantumState hadamard_transform(const QuantumState& state, std::string_view reg) {
  const RegisterSlot slot = state.layout().slot(reg);
  const std::uint64_t n = slot.dim();
  CMatrix h(as_index(n), as_index(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      h(as_index(i), as_index(j)) = (std::popcount(i & j) % 2 == 0) ? scale : -scale;
    }
  }
  return apply_register_operator(state, reg, h);
}

QuantumState apply_controlled_power(const QuantumState& state, const CMatrix& u,
                                    std::string_view control_register,
                                    std::string_view target_register) {
  require_distinct(control_register, target_register);
  const RegisterSlot control = state.layout().slot(control_register);
  const RegisterSlot target = state.layout().slot(target_register);
  if (static_cast<std::uint64_t>(u.rows()) != target.dim() || u.rows() != u.cols()) {
    std::ostringstream msg;
    msg << "unitary is " << u.rows() << "x" << u.cols() << " but register '" << target_register
        << "' has dimension " << target.dim();
    throw PreconditionError(msg.str());
  }
  require_unitary(u);

  CVector out = state.amplitudes();
  CVector local(as_index(target.dim()));
  CMatrix power = u;  // U^(2^bit)
  for (int bit = 0; bit < control.width; ++bit) {
    if (bit > 0) power = power * power;
    const std::uint64_t control_bit = std::uint64_t{1} << (control.shift + bit);
    for_each_base(state.num_qubits(), target, [&](std::uint64_t base) {
      if ((base & control_bit) == 0) return;
      for (std::uint64_t v = 0; v < target.dim(); ++v) {
        local(as_index(v)) = out(as_index(base | (v << target.shift)));
      }
      const CVector mapped = power * local;
      for (std::uint64_t v = 0; v < target.dim(); ++v) {
        out(as_index(base | (v << target.shift))) = mapped(as_index(v));
      }
    });
  }
  return StateBuilder::make(state.layout(), std::move(out));
}

QuantumState apply_conditional(
    const QuantumState& state, std::string_view control_register,
    std::string_view target_register,
    const std::function<std::optional<CMatrix>(std::uint64_t)>& ops) {
  require_distinct(control_register, target_register);
  const RegisterSlot control = state.layout().slot(control_register);
  const RegisterSlot target = state.layout().slot(target_register);

  std::vector<std::optional<CMatrix>> table(control.dim());
  for (std::uint64_t x = 0; x < control.dim(); ++x) {
    table[x] = ops(x);
    if (table[x]) {
      if (static_cast<std::uint64_t>(table[x]->rows()) != target.dim()) {
        throw PreconditionError("conditional operator does not match the target register");
      }
      require_unitary(*table[x]);
    }
  }

  CVector out = state.amplitudes();
  CVector local(as_index(target.dim()));
  for_each_base(state.num_qubits(), target, [&](std::uint64_t base) {
    const auto& op = table[(base >> control.shift) & control.mask()];
    if (!op) return;
    for (std::uint64_t v = 0; v < target.dim(); ++v) {
      local(as_index(v)) = out(as_index(base | (v << target.shift)));
    }
    const CVector mapped = *op * local;
    for (std::uint64_t v = 0; v < target.dim(); ++v) {
      out(as_index(base | (v << target.shift))) = mapped(as_index(v));
    }
  });
  return StateBuilder::make(state.layout(), std::move(out));
}

CMatrix inverse_dft_matrix(std::uint64_t n) {
  CMatrix f(as_index(n), as_index(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t y = 0; y < n; ++y) {
    for (std::uint64_t x = 0; x < n; ++x) {
      // Reduce x*y mod n first so the angle stays small and exact.
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((x * y) % n) / static_cast<double>(n);
      f(as_index(y), as_index(x)) = std::polar(scale, angle);
    }
  }
  return f;
}

QuantumState inverse_qft(const QuantumState& state, std::string_view reg) {
  return apply_register_operator(state, reg, inverse_dft_matrix(state.layout().slot(reg).dim()));
}

QuantumState qft(const QuantumState& state, std::string_view reg) {
  return apply_register_operator(state, reg,
                                 inverse_dft_matrix(state.layout().slot(reg).dim()).adjoint());
}

QuantumState reorder_registers(const QuantumState& state, const std::vector<std::string>& order) {
  const auto& regs = state.layout().registers();
  if (order.size() != regs.size()) {
    throw PreconditionError("register order must name every register exactly once");
  }
  std::vector<Register> reordered;
  for (const auto& name : order) {
    const auto it = std::find_if(regs.begin(), regs.end(),
                                 [&](const Register& r) { return r.name == name; });
    if (it == regs.end()) {
      throw PreconditionError("no register named '" + name + "'");
    }
    reordered.push_back(*it);
  }
  RegisterLayout layout(std::move(reordered));  // rejects duplicates

  CVector out(state.amplitudes().size());
  for (std::uint64_t idx = 0; idx < state.layout().dim(); ++idx) {
    std::uint64_t target = 0;
    for (const auto& r : layout.registers()) {
      const RegisterSlot from = state.layout().slot(r.name);
      const RegisterSlot to = layout.slot(r.name);
      target |= ((idx >> from.shift) & from.mask()) << to.shift;
    }
    out(as_index(target)) = state.amplitudes()(as_index(idx));
  }
  return StateBuilder::make(std::move(layout), std::move(out));
}

ProbabilityTable measure(const QuantumState& state, std::string_view reg) {
  const RegisterSlot slot = state.layout().slot(reg);
  ProbabilityTable table;
  table.probabilities.assign(slot.dim(), 0.0);
  const CVector& amps = state.amplitudes();
  for (std::uint64_t idx = 0; idx < state.layout().dim(); ++idx) {
    table.probabilities[(idx >> slot.shift) & slot.mask()] += std::norm(amps(as_index(idx)));
  }
  return table;
}

MeasurementRecord measure_outcome(const QuantumState& state, std::string_view reg,
                                  std::uint64_t outcome) {
  const RegisterSlot slot = state.layout().slot(reg);
  if (outcome >= slot.dim()) {
    throw PreconditionError("outcome out of range for register '" + std::string(reg) + "'");
  }
  CVector out = CVector::Zero(state.amplitudes().size());
  for (std::uint64_t idx = 0; idx < state.layout().dim(); ++idx) {
    if (((idx >> slot.shift) & slot.mask()) == outcome) {
      out(as_index(idx)) = state.amplitudes()(as_index(idx));
    }
  }
  const double probability = out.squaredNorm();
  if (!(probability >= 1e-300)) {
    std::ostringstream msg;
    msg << "outcome " << outcome << " of register '" << reg << "' has probability "
        << probability;
    throw PostselectionError(msg.str());
  }
  out /= std::sqrt(probability);
  return MeasurementRecord{std::string(reg), outcome, probability,
                           StateBuilder::make(state.layout(), std::move(out))};
}

CVector zero_branch(const QuantumState& state, std::string_view keep) {
  const RegisterSlot slot = state.layout().slot(keep);
  CVector out(as_index(slot.dim()));
  for (std::uint64_t v = 0; v < slot.dim(); ++v) {
    out(as_index(v)) = state.amplitudes()(as_index(v << slot.shift));
  }
  return out;
}

Counts sample(const ProbabilityTable& table, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) {
    throw PreconditionError("shots must be >= 1");
  }
  if (table.probabilities.empty()) {
    throw PreconditionError("cannot sample an empty probability table");
  }
  std::vector<double> cumulative(table.size());
  double running = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table.probabilities[i] >= 0.0)) {
      throw PreconditionError("probabilities must be nonnegative");
    }
    running += table.probabilities[i];
    cumulative[i] = running;
  }
  if (!(running > 0.0)) {
    throw PreconditionError("probability table has zero total mass");
  }

  SplitMix64 rng(seed);
  Counts counts(table.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t outcome = static_cast<std::size_t>(it - cumulative.begin());
    if (outcome >= table.size()) outcome = table.size() - 1;
    // Never land on a zero-probability outcome through rounding.
    while (table.probabilities[outcome] == 0.0 && outcome > 0) --outcome;
    ++counts[outcome];
  }
  return counts;
}

std::uint64_t sample_binomial(double p, std::uint64_t shots, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError("Bernoulli probability must lie in [0, 1]");
  }
  const Counts counts = sample(ProbabilityTable{{1.0 - p, p}}, shots, seed);
  return counts[1];
}

}  // namespace qcaveat
