#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcaveat/linalg.hpp"

namespace qcaveat {

/// Dense simulation stops here (2^22 amplitudes).
inline constexpr int kMaxQubits = 22;

/// Norm tolerance accepted by prepare_state before renormalizing.
inline constexpr double kPrepareNormTolerance = 1e-8;

struct Register {
  std::string name;
  int width = 0;
};

/// Where a register lives inside the global basis index.
struct RegisterSlot {
  int shift = 0;  ///< number of less significant qubits
  int width = 0;
  std::uint64_t mask() const noexcept { return (std::uint64_t{1} << width) - 1; }
  std::uint64_t dim() const noexcept { return std::uint64_t{1} << width; }
};

/// Ordered, named, contiguous qubit ranges.
///
/// The global basis index concatenates register values in layout order with
/// the first register most significant. Within a register the first qubit is
/// the most significant bit of the register value (big-endian).
class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(std::initializer_list<Register> registers);
  explicit RegisterLayout(std::vector<Register> registers);

  const std::vector<Register>& registers() const noexcept { return registers_; }
  int num_qubits() const noexcept { return num_qubits_; }
  std::uint64_t dim() const noexcept { return std::uint64_t{1} << num_qubits_; }

  bool contains(std::string_view name) const;
  RegisterSlot slot(std::string_view name) const;

  /// Layout with `other` appended as less significant registers.
  RegisterLayout concat(const RegisterLayout& other) const;

  friend bool operator==(const RegisterLayout&, const RegisterLayout&);

 private:
  std::vector<Register> registers_;
  int num_qubits_ = 0;
};

bool operator==(const Register& a, const Register& b);

namespace detail {
struct StateBuilder;
}

/// Normalized pure state over a register layout. Immutable: every operation
/// returns a new state.
class QuantumState {
 public:
  const RegisterLayout& layout() const noexcept { return layout_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  int num_qubits() const noexcept { return layout_.num_qubits(); }
  Complex amplitude(std::uint64_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

 private:
  friend struct detail::StateBuilder;
  QuantumState(RegisterLayout layout, CVector amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {}

  RegisterLayout layout_;
  CVector amplitudes_;
};

/// Exact Born-rule distribution over one register's basis outcomes.
struct ProbabilityTable {
  std::vector<double> probabilities;

  std::size_t size() const noexcept { return probabilities.size(); }
  double operator[](std::size_t outcome) const { return probabilities.at(outcome); }
  double total() const;
  std::size_t argmax() const;
};

struct MeasurementRecord {
  std::string register_name;
  std::uint64_t outcome = 0;
  double probability = 0.0;
  QuantumState post_state;
};

using Counts = std::vector<std::uint64_t>;

/// Validates length and norm, renormalizes. Throws PreconditionError on a
/// zero vector, a length that is not 2^n for the layout, or a norm more than
/// kPrepareNormTolerance away from 1.
QuantumState prepare_state(const RegisterLayout& layout, const CVector& amplitudes);

/// Computational basis state |index>.
QuantumState basis_state(const RegisterLayout& layout, std::uint64_t index);

/// Embeds `v` (any nonzero length up to 2^width) into a single register named
/// `name`, zero-padding to the next power of two and normalizing.
QuantumState embed_vector(const std::string& name, const CVector& v);

/// |first> (x) |second>; first's registers stay most significant.
QuantumState tensor_product(const QuantumState& first, const QuantumState& second);

/// Applies a 2^w x 2^w matrix to one register.
QuantumState apply_register_operator(const QuantumState& state, std::string_view reg,
                                     const CMatrix& op);

/// Walsh-Hadamard on every qubit of a register.
QuantumState hadamard_transform(const QuantumState& state, std::string_view reg);

/// |x>_control |psi>_target -> |x>_control U^x |psi>_target. U^x is assembled
/// from U^(2^m) factors obtained by repeated squaring. Throws
/// PreconditionError if U is not unitary within 1e-10 or its dimension does
/// not match the target register.
QuantumState apply_controlled_power(const QuantumState& state, const CMatrix& u,
                                    std::string_view control_register,
                                    std::string_view target_register = "system");

/// Applies ops(x) to the target register on every branch where the control
/// register holds x. Branches where ops returns nullopt are left unchanged.
QuantumState apply_conditional(
    const QuantumState& state, std::string_view control_register,
    std::string_view target_register,
    const std::function<std::optional<CMatrix>(std::uint64_t)>& ops);

/// (1/sqrt N) sum_y e^{-2 pi i x y / N} |y><x| on one register.
QuantumState inverse_qft(const QuantumState& state, std::string_view reg);
/// Adjoint of inverse_qft.
QuantumState qft(const QuantumState& state, std::string_view reg);

/// Register order permuted to `order` (a permutation of the layout's names).
QuantumState reorder_registers(const QuantumState& state, const std::vector<std::string>& order);

ProbabilityTable measure(const QuantumState& state, std::string_view reg);

/// Projects onto `outcome` of `reg` and renormalizes. Throws
/// PostselectionError when the outcome has probability below 1e-300.
MeasurementRecord measure_outcome(const QuantumState& state, std::string_view reg,
                                  std::uint64_t outcome);

/// Amplitudes of the `keep` register on the branch where every other register
/// is zero, unnormalized.
CVector zero_branch(const QuantumState& state, std::string_view keep);

/// Multinomial draw of `shots` outcomes; deterministic in (table, shots, seed).
Counts sample(const ProbabilityTable& table, std::uint64_t shots, std::uint64_t seed);

/// Number of successes in `shots` Bernoulli(p) trials.
std::uint64_t sample_binomial(double p, std::uint64_t shots, std::uint64_t seed);

/// Matrix of the inverse DFT on N points.
CMatrix inverse_dft_matrix(std::uint64_t n);

}  // namespace qcaveat
