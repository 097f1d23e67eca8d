#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qcaveat/hhl.hpp"
#include "qcaveat/linalg.hpp"

namespace qcaveat {

/// One eigencomponent in the error ledger.
struct ModeError {
  Complex beta;            ///< <u_j|b>
  double eigenvalue = 0.0;  ///< lambda_j
  double decoded = 0.0;     ///< lambda-hat_j from the rounding model
  bool kept = false;
  /// Effective inverse <u_j|x~> / beta_j of the approximate solution; zero for
  /// filtered modes. Falls back to the rounding model when beta_j vanishes.
  Complex inverse_tilde;
  /// lambda_j <u_j|x~> - beta_j, the mode's contribution to A x~ - b.
  Complex residual_term;
};

/// Error ledger of an approximate solution x~ against the exact x = A^-1 b.
struct ErrorReport {
  double z = 0.0;        ///< |x|^2
  double z_tilde = 0.0;  ///< |x~|^2
  double state_error = 0.0;      ///< | |x> - |x~> |
  double classical_error = 0.0;  ///< |x - x~|
  double residual = 0.0;         ///< |A x~ - b|
  /// max_j |lambda_j^-1 - lambda~_j^-1| over all modes.
  double max_inverse_error = 0.0;
  /// sum_j |beta_j|^2 | |lambda_j^-1|^2 - |lambda~_j^-1|^2 |, an upper bound on |Z - Z~|.
  double z_gap_bound = 0.0;
  double kappa = 0.0;
  /// True when some mode was filtered and enters the ledger with inverse 0.
  bool filtered_modes = false;
  std::vector<ModeError> per_mode;

  /// sum_j |beta_j (lambda_j lambda~_j^-1 - 1)|^2 recomputed from per_mode.
  double residual_from_modes_squared() const;
};

/// Builds the ledger for an HHL result on (A, b). A must be invertible.
/// Throws PreconditionError on dimension mismatch, SingularMatrixError for
/// singular A.
ErrorReport error_report(const HermitianMatrix& a, const CVector& b, const HhlResult& result);

/// Same ledger for an arbitrary approximate solution vector.
ErrorReport error_report(const HermitianMatrix& a, const CVector& b, const CVector& x_tilde);

/// epsilon = target / max{kappa |b|^2, |x|}: the per-eigenvalue accuracy that
/// keeps both |Z - Z~| and the classical error below target.
double accuracy_budget(double kappa, double b_norm, double x_norm, double target);

enum class CostVariant { qpe, base, rescaled, thresholded, norm_aware };

std::string_view to_string(CostVariant v);
CostVariant cost_variant_from_string(std::string_view name);

/// Inputs to the complexity formulas. Each variant reads only the fields it
/// needs; a missing or nonpositive required field is a PreconditionError.
struct CostModel {
  std::optional<double> m;  ///< matrix dimension, >= 2 so that log M > 0
  std::optional<double> s;  ///< sparseness
  std::optional<double> kappa;
  std::optional<double> epsilon;  ///< simulation accuracy
  std::optional<double> delta;    ///< eigenvalue accuracy
  std::optional<double> t;
  std::optional<double> mu;
  std::optional<double> gamma;
  std::optional<double> lambda_min;  ///< smallest |eigenvalue| of the unscaled matrix
  std::optional<double> b_norm;
  std::optional<double> x_norm;
  std::optional<double> epsilon_target;  ///< final accuracy epsilon~

  /// delta = pi / (t N) from a phase estimation setup.
  static double delta_from(const QpeConfig& config) { return config.resolution(); }
};

/// Cost in unit-constant "cost units" (natural log):
///   qpe          log M / (epsilon delta^gamma)
///   base         log M s^2 kappa^2 / epsilon
///   rescaled     log M s^2 / (t^2 lambda_min^2 epsilon)
///   thresholded  log M s^2 / (t^2 mu^2 epsilon)
///   norm_aware   log M s^2 kappa^2 max{kappa |b|^2, |x|} / epsilon~
double hhl_cost(const CostModel& model, CostVariant variant);

/// Quantum counting to relative error epsilon: sqrt(N / K) / epsilon.
double counting_cost(double n, double k, double epsilon);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qcaveat
