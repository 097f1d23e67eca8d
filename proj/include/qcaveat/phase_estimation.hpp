#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qcaveat/linalg.hpp"
#include "qcaveat/statevector.hpp"

namespace qcaveat {

enum class BoundChoice { trace_bound, one_norm, frobenius, max_entry_bound, exact_lambda_max };

std::string_view to_string(BoundChoice b);
BoundChoice bound_choice_from_string(std::string_view name);

/// How to compress the spectrum before phase estimation: t = rho * pi / bound.
struct TimeScalePolicy {
  BoundChoice bound = BoundChoice::exact_lambda_max;
  double safety_factor = 0.99;  ///< rho in (0, 1)
};

struct QpeConfig {
  double t = 1.0;        ///< time scale
  int clock_qubits = 3;  ///< k, N = 2^k

  std::uint64_t grid_size() const noexcept { return std::uint64_t{1} << clock_qubits; }
  /// pi / (t N), the guaranteed eigenvalue resolution.
  double resolution() const;
};

struct QpeOutcome {
  std::vector<double> distribution;  ///< Prob(y) for y = 0..N-1
  std::vector<double> decoded;       ///< lambda-hat for each y
  std::uint64_t peak_y = 0;
  double peak_probability = 0.0;
};

/// Largest |lambda| * t accepted anywhere phase estimation runs.
bool phase_in_range(double lambda, double t);

/// t = rho * pi / bound. Throws PreconditionError for a zero matrix or rho
/// outside (0, 1).
double choose_time_scale(const HermitianMatrix& a, const TimeScalePolicy& policy);

/// min(0.99, 1 - 2/N) for N = 2^k (0.5 when k = 1). With this rho and an exact
/// bound, every |lambda t| stays below pi (1 - 1/N), so no eigenvalue rounds to
/// the midpoint y = N/2 and decodes with the wrong sign.
double alias_free_safety_factor(int clock_qubits);

/// Sign-aware decoding: (2 pi y / N) / t when 2 pi y / N <= pi, otherwise
/// -2 pi (N - y) / (N t). The midpoint y = N/2 decodes as +pi/t.
double decode_eigenvalue(std::uint64_t y, const QpeConfig& config);

/// Nearest clock grid point to lambda * t, ties toward the smaller unwrapped
/// grid index, wrapped into [0, N).
std::uint64_t nearest_grid_point(double lambda, const QpeConfig& config);

/// Single-eigenvalue outcome distribution
///   Prob(y) = |sin(N phi / 2) / (N sin(phi / 2))|^2,  phi = lambda t - 2 pi y / N,
/// with the removable singularity (phi = 0 mod 2 pi within 1e-12) set to 1.
/// Requires |lambda t| < pi.
QpeOutcome qpe_distribution_closed_form(double lambda, const QpeConfig& config);

/// Full circuit: uniform clock, controlled powers of exp(iAt), inverse QFT on
/// the clock, Born-rule distribution of the clock. `input` must hold a single
/// register whose dimension equals A's.
QpeOutcome qpe_circuit(const HermitianMatrix& a, const QuantumState& input,
                       const QpeConfig& config);

/// Clock-register state after the inverse QFT (before measurement), with
/// the clock register named "clock" placed ahead of the input register.
QuantumState qpe_state(const SpectralDecomposition& d, const QuantumState& input,
                       const QpeConfig& config);

}  // namespace qcaveat
