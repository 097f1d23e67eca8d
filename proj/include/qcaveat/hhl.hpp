#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcaveat/linalg.hpp"
#include "qcaveat/phase_estimation.hpp"
#include "qcaveat/statevector.hpp"

namespace qcaveat {

/// Every tunable of an HHL run.
struct HhlConfig {
  double t = 1.0;
  int clock_qubits = 6;
  /// Decoded eigenvalues with |lambda-hat| < mu are not inverted.
  double mu = 0.0;
  /// Rotation constant C. Defaults to the smallest kept |lambda-hat| times
  /// (1 - 1e-9), the largest value that keeps every kept amplitude valid.
  std::optional<double> rotation_constant;
  /// 0 means exact postselection; otherwise the success probability is
  /// also estimated from this many shots.
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  QpeConfig qpe() const { return QpeConfig{t, clock_qubits}; }
};

/// One eigencomponent of the right-hand side under the rounding model.
struct HhlMode {
  double eigenvalue = 0.0;
  double decoded = 0.0;  ///< lambda-hat on the clock grid
  Complex beta;          ///< <u_j|b>
  bool kept = false;
};

struct HhlResult {
  QuantumState solution_state;  ///< |x~> over the "system" register, zero-padded
  double success_probability = 0.0;
  /// Shot estimate of the success probability when config.shots > 0.
  std::optional<double> sampled_success_probability;
  CVector decoded_solution;  ///< |x~| |x~>
  Eigen::Index kept_eigenvalue_count = 0;
  double discarded_weight = 0.0;  ///< sum |beta_j|^2 / |b|^2 over filtered modes
  double rotation_constant = 0.0;
  std::vector<HhlMode> modes;  ///< eigen-ordered, as decoded by the rounding model
  /// Circuit only: probability that the clock returned to |0> given success.
  std::optional<double> clock_return_probability;

  /// Z~ = |x~|^2.
  double z_tilde() const { return decoded_solution.squaredNorm(); }
};

/// Analytic model: each eigenvalue is rounded to its nearest clock grid
/// point and decoded, the mu filter is applied to the decoded values, and
///   x~ = sum_kept beta_j / lambda-hat_j |u_j>,
///   success = C^2 |x~|^2 / |b|^2.
/// Throws EmptySolutionError when the filter leaves a zero solution.
HhlResult hhl_ideal(const HermitianMatrix& a, const CVector& b, const HhlConfig& config);

/// Full simulation on |0>_ancilla |0..0>_clock |b>_system: phase estimation,
/// eigenvalue-conditioned rotation |0> -> sqrt(1 - c^2)|0> + c|1> with
/// c = C / lambda-hat for |lambda-hat| >= mu, uncompute, postselect the
/// ancilla on 1. The solution is read from the branch where the clock has
/// returned to |0>. A's dimension must be a power of two.
/// Throws PostselectionError when the success probability is below 1e-12.
HhlResult hhl_circuit(const HermitianMatrix& a, const CVector& b, const HhlConfig& config);

/// t * A-tilde: eigenvalues scale by t, eigenvectors are unchanged.
HermitianMatrix scaling_rescale(const HermitianMatrix& a_tilde, double t);

/// 1 - |<a|b>|^2 for two vectors, normalized internally.
double fidelity_error(const CVector& a, const CVector& b);

}  // namespace qcaveat
