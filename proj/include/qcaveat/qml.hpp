#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcaveat/hhl.hpp"
#include "qcaveat/linalg.hpp"

namespace qcaveat {

/// A set of same-length vectors with optional real labels.
class Dataset {
 public:
  explicit Dataset(std::vector<CVector> vectors, std::optional<RVector> labels = std::nullopt);

  const std::vector<CVector>& vectors() const noexcept { return vectors_; }
  const std::optional<RVector>& labels() const noexcept { return labels_; }
  Eigen::Index dim() const noexcept { return vectors_.front().size(); }
  std::size_t size() const noexcept { return vectors_.size(); }
  CVector mean() const;

 private:
  std::vector<CVector> vectors_;
  std::optional<RVector> labels_;
};

/// A shot-based estimate with its 95% Hoeffding halfwidth.
struct ShotEstimate {
  double value = 0.0;
  std::uint64_t shots = 0;
  double confidence_halfwidth = 0.0;
  std::optional<double> exact;
};

/// range * sqrt(ln(2 / 0.05) / (2 shots)).
double hoeffding_halfwidth(double range, std::uint64_t shots);

/// Acceptance probability 1/2 + |<a|b>|^2 / 2 of the swap-test circuit,
/// read off a simulated ancilla + two-register statevector.
double swap_test_probability(const CVector& a, const CVector& b);

struct SwapTestResult {
  ShotEstimate overlap;  ///< 2 p-hat - 1 clamped to [0, 1]; estimates |<a|b>|^2
  double unclamped = 0.0;  ///< 2 p-hat - 1 before clamping
  double acceptance_probability = 0.0;
};

/// Both inputs must be unit vectors of equal length; shots >= 1.
SwapTestResult swap_test(const CVector& a, const CVector& b, std::uint64_t shots,
                         std::uint64_t seed);

/// Ancilla interference (Hadamard test) on (|0>|a> + e^{i theta}|1>|b>)/sqrt(2):
/// P(ancilla = 0) = (1 + Re(e^{i theta} <a|b>)) / 2.
double interference_probability(const CVector& a, const CVector& b, double theta);

struct OverlapEstimate {
  ShotEstimate real;
  ShotEstimate imag;
  Complex value() const { return {real.value, imag.value}; }
};

/// Estimates <a|b> with two Hadamard tests (theta = 0 and -pi/2).
OverlapEstimate interference_test(const CVector& a, const CVector& b, std::uint64_t shots,
                                  std::uint64_t seed);

struct RegressionPrediction {
  Complex exact = 0.0;       ///< c . x with x from the classical normal equations
  Complex prediction = 0.0;  ///< |c| |x~| <c|x~>-hat
  Complex overlap_exact = 0.0;     ///< <c|x>
  Complex overlap_estimate = 0.0;  ///< sqrt(swap) with the interference phase
  double state_error = 0.0;        ///< | |x> - |x~> |
  double overlap_error = 0.0;      ///< |<c|x>-hat - <c|x>|
  double prediction_error = 0.0;   ///< |prediction - exact|
  double amplification = 0.0;      ///< |c| |x|
  double x_norm = 0.0;
  double x_tilde_norm = 0.0;
};

/// Solves F^dagger F x = F^dagger b with hhl_ideal and predicts c . x = <c, x>
/// (conjugating c). shots = 0 uses exact probabilities.
RegressionPrediction regression_predict(const CMatrix& f, const CVector& b, const CVector& c,
                                        const HhlConfig& config, std::uint64_t shots,
                                        std::uint64_t seed);

/// Largest t * max{|u|, |v_j|} accepted by classification_distance.
inline constexpr double kMaxClassificationAngle = 0.1;

struct ClassificationEstimate {
  double distance_exact = 0.0;     ///< |u - mean(V)|^2
  double distance_estimate = 0.0;  ///< 2 P-hat Z-hat^2
  double distance_error = 0.0;
  double z = 0.0;  ///< |u|^2 + (1/M) sum |v_j|^2
  double z_estimate = 0.0;  ///< 2 p1-hat / t^2
  /// P = |u - mean(V)|^2 / (2 Z^2), the quantity that is shot-sampled.
  ShotEstimate p;
  /// Probability of the |1> flag after the preparation evolution.
  ShotEstimate p1;
  double p1_first_order = 0.0;  ///< Z t^2 / 2
  /// |<phi|psi>|^2 = |u - mean(V)|^2 / (2 Z) for the normalized reference states.
  double overlap_probability = 0.0;
  /// Target state (|u||0> - M^-1/2 sum |v_j||j>) / sqrt(Z) over M + 1 entries.
  CVector target_state;
  /// Normalized post-selected state produced by the finite-t evolution.
  CVector prepared_state;
  double preparation_error = 0.0;  ///< |prepared - target|
  /// 2 Z^2, the factor that turns an error in P into a distance error.
  double amplification = 0.0;
};

/// Throws PreconditionError when t * max norm exceeds kMaxClassificationAngle,
/// on dimension mismatch, for t <= 0 or shots == 0.
ClassificationEstimate classification_distance(const CVector& u, const Dataset& v, double t,
                                               std::uint64_t shots, std::uint64_t seed);

struct TraceEstimate {
  ShotEstimate normalized;  ///< Tr(K) / M
  ShotEstimate total;       ///< Tr(K) = M * normalized
};

/// Each shot reads one uniformly drawn diagonal entry. K must be positive
/// semidefinite (checked with a pivoted LDL^T); shots >= 1.
TraceEstimate trace_estimate(const HermitianMatrix& k, std::uint64_t shots, std::uint64_t seed);

/// K_ij = <x_i, x_j> (conjugate-linear in the first argument).
HermitianMatrix gram_matrix(const Dataset& x);

struct LssvmSystem {
  HermitianMatrix f;
  RVector rhs;
};

/// F = [[0, 1^T], [1, K + I / gamma]], rhs = (0, y).
LssvmSystem build_lssvm_system(const Dataset& x, const RVector& y, double gamma);

}  // namespace qcaveat
