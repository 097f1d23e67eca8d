#include "qcaveat/phase_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularPhase = 1e-12;

void validate(const QpeConfig& config) {
  if (!(config.t > 0.0) || !std::isfinite(config.t)) {
    throw PreconditionError("time scale t must be finite and > 0");
  }
  if (config.clock_qubits < 1 || config.clock_qubits > 20) {
    throw PreconditionError("clock_qubits must lie in [1, 20]");
  }
}

std::vector<double> decoded_table(const QpeConfig& config) {
  std::vector<double> decoded(config.grid_size());
  for (std::uint64_t y = 0; y < decoded.size(); ++y) decoded[y] = decode_eigenvalue(y, config);
  return decoded;
}

void fill_peak(QpeOutcome& out) {
  out.peak_y = 0;
  out.peak_probability = out.distribution.empty() ? 0.0 : out.distribution[0];
  for (std::uint64_t y = 1; y < out.distribution.size(); ++y) {
    if (out.distribution[y] > out.peak_probability) {
      out.peak_probability = out.distribution[y];
      out.peak_y = y;
    }
  }
}

}  // namespace

std::string_view to_string(BoundChoice b) {
  switch (b) {
    case BoundChoice::trace_bound:
      return "trace_bound";
    case BoundChoice::one_norm:
      return "one_norm";
    case BoundChoice::frobenius:
      return "frobenius";
    case BoundChoice::max_entry_bound:
      return "max_entry_bound";
    case BoundChoice::exact_lambda_max:
      return "exact_lambda_max";
  }
  return "unknown";
}

BoundChoice bound_choice_from_string(std::string_view name) {
  for (BoundChoice b : {BoundChoice::trace_bound, BoundChoice::one_norm, BoundChoice::frobenius,
                        BoundChoice::max_entry_bound, BoundChoice::exact_lambda_max}) {
    if (to_string(b) == name) return b;
  }
  throw PreconditionError("unknown bound choice '" + std::string(name) + "'");
}

double QpeConfig::resolution() const {
  return kPi / (t * static_cast<double>(grid_size()));
}

bool phase_in_range(double lambda, double t) { return std::abs(lambda * t) < kPi; }

double choose_time_scale(const HermitianMatrix& a, const TimeScalePolicy& policy) {
  if (!(policy.safety_factor > 0.0 && policy.safety_factor < 1.0)) {
    throw PreconditionError("safety factor must lie in (0, 1)");
  }
  double bound = 0.0;
  if (policy.bound == BoundChoice::exact_lambda_max) {
    bound = eig_hermitian(a).eigenvalues.cwiseAbs().maxCoeff();
  } else {
    const SpectralBounds b = spectral_bounds(a);
    switch (policy.bound) {
      case BoundChoice::trace_bound:
        bound = b.trace_bound;
        break;
      case BoundChoice::one_norm:
        bound = b.one_norm;
        break;
      case BoundChoice::frobenius:
        bound = b.frobenius;
        break;
      case BoundChoice::max_entry_bound:
        bound = b.max_entry_bound;
        break;
      case BoundChoice::exact_lambda_max:
        break;
    }
  }
  if (!(bound > 0.0)) {
    throw PreconditionError("zero matrix has no time scale");
  }
  return policy.safety_factor * kPi / bound;
}

double alias_free_safety_factor(int clock_qubits) {
  if (clock_qubits < 1) throw PreconditionError("clock_qubits must be >= 1");
  if (clock_qubits == 1) return 0.5;
  const double n = std::ldexp(1.0, std::min(clock_qubits, 60));
  return std::min(0.99, 1.0 - 2.0 / n);
}

double decode_eigenvalue(std::uint64_t y, const QpeConfig& config) {
  validate(config);
  const std::uint64_t n = config.grid_size();
  if (y >= n) {
    throw PreconditionError("clock outcome out of range");
  }
  const double nn = static_cast<double>(n);
  if (2 * y <= n) {
    return 2.0 * kPi * static_cast<double>(y) / (nn * config.t);
  }
  return -2.0 * kPi * static_cast<double>(n - y) / (nn * config.t);
}

std::uint64_t nearest_grid_point(double lambda, const QpeConfig& config) {
  validate(config);
  const auto n = static_cast<std::int64_t>(config.grid_size());
  const double s = lambda * config.t * static_cast<double>(n) / (2.0 * kPi);
  auto k = static_cast<std::int64_t>(std::floor(s));
  if (s - static_cast<double>(k) > 0.5) ++k;
  k %= n;
  if (k < 0) k += n;
  return static_cast<std::uint64_t>(k);
}

QpeOutcome qpe_distribution_closed_form(double lambda, const QpeConfig& config) {
  validate(config);
  if (!phase_in_range(lambda, config.t)) {
    std::ostringstream msg;
    msg << "|lambda t| = " << std::abs(lambda * config.t) << " must be < pi";
    throw PreconditionError(msg.str());
  }
  const std::uint64_t n = config.grid_size();
  const double nn = static_cast<double>(n);
  QpeOutcome out;
  out.distribution.resize(n);
  for (std::uint64_t y = 0; y < n; ++y) {
    const double phi = std::remainder(lambda * config.t - 2.0 * kPi * static_cast<double>(y) / nn,
                                      2.0 * kPi);
    if (std::abs(phi) < kSingularPhase) {
      out.distribution[y] = 1.0;
      continue;
    }
    const double ratio = std::sin(nn * phi / 2.0) / (nn * std::sin(phi / 2.0));
    out.distribution[y] = ratio * ratio;
  }
  out.decoded = decoded_table(config);
  fill_peak(out);
  return out;
}

QuantumState qpe_state(const SpectralDecomposition& d, const QuantumState& input,
                       const QpeConfig& config) {
  validate(config);
  if (input.layout().registers().size() != 1) {
    throw PreconditionError("phase estimation input must hold exactly one register");
  }
  const std::string& target = input.layout().registers().front().name;
  if (target == "clock") {
    throw PreconditionError("input register may not be named 'clock'");
  }
  if (static_cast<std::uint64_t>(d.dim()) != input.layout().dim()) {
    throw PreconditionError("input register dimension does not match the matrix");
  }
  const double top = d.eigenvalues.cwiseAbs().maxCoeff();
  if (!phase_in_range(top, config.t)) {
    std::ostringstream msg;
    msg << "|lambda_max t| = " << top * config.t << " must be < pi";
    throw PreconditionError(msg.str());
  }

  const RegisterLayout clock_layout{{"clock", config.clock_qubits}};
  QuantumState state =
      tensor_product(hadamard_transform(basis_state(clock_layout, 0), "clock"), input);
  state = apply_controlled_power(state, matrix_exponential_unitary(d, config.t), "clock", target);
  return inverse_qft(state, "clock");
}

QpeOutcome qpe_circuit(const HermitianMatrix& a, const QuantumState& input,
                       const QpeConfig& config) {
  const QuantumState final_state = qpe_state(eig_hermitian(a), input, config);
  QpeOutcome out;
  out.distribution = measure(final_state, "clock").probabilities;
  out.decoded = decoded_table(config);
  fill_peak(out);
  return out;
}

}  // namespace qcaveat
