#include "qcaveat/error_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

constexpr double kZeroCoefficient = 1e-14;

double require(const std::optional<double>& field, const char* name) {
  if (!field) throw PreconditionError(std::string("cost model field '") + name + "' is required");
  if (!(*field > 0.0) || !std::isfinite(*field)) {
    throw PreconditionError(std::string("cost model field '") + name + "' must be finite and > 0");
  }
  return *field;
}

double log_dimension(const CostModel& model) {
  const double m = require(model.m, "M");
  if (m < 2.0) throw PreconditionError("cost model field 'M' must be >= 2");
  return std::log(m);
}

ErrorReport build_report(const HermitianMatrix& a, const CVector& b, const CVector& x_tilde,
                         const std::vector<HhlMode>* modes) {
  if (b.size() != a.dim() || x_tilde.size() != a.dim()) {
    throw PreconditionError("error_report: dimensions of A, b and x~ differ");
  }
  if (!(b.norm() > 0.0)) throw PreconditionError("error_report: b must be nonzero");
  if (modes && static_cast<Eigen::Index>(modes->size()) != a.dim()) {
    throw PreconditionError("error_report: result was produced for a different matrix");
  }

  const SpectralDecomposition d = eig_hermitian(a);
  const double kappa = condition_number(d);  // throws on singular A
  const CVector beta = d.coordinates(b);
  const CVector c = d.coordinates(x_tilde);
  const double b_norm = b.norm();

  ErrorReport r;
  r.kappa = kappa;
  CVector x = CVector::Zero(a.dim());
  for (Eigen::Index j = 0; j < a.dim(); ++j) {
    const double lambda = d.eigenvalues(j);
    x += (beta(j) / lambda) * d.eigenvectors.col(j);

    ModeError m;
    m.beta = beta(j);
    m.eigenvalue = lambda;
    if (modes) {
      const HhlMode& h = (*modes)[static_cast<std::size_t>(j)];
      m.decoded = h.decoded;
      m.kept = h.kept;
    } else {
      m.decoded = std::abs(c(j)) > 0.0 && std::abs(beta(j)) > 0.0 ? std::real(beta(j) / c(j)) : 0.0;
      m.kept = std::abs(c(j)) > 0.0;
    }
    if (std::abs(beta(j)) > kZeroCoefficient * b_norm) {
      m.inverse_tilde = c(j) / beta(j);
    } else if (m.kept && m.decoded != 0.0) {
      m.inverse_tilde = 1.0 / m.decoded;
    }
    if (modes && !m.kept) r.filtered_modes = true;
    m.residual_term = lambda * c(j) - beta(j);

    const double inv = 1.0 / lambda;
    r.max_inverse_error = std::max(r.max_inverse_error, std::abs(inv - m.inverse_tilde));
    r.z_gap_bound += std::norm(beta(j)) * std::abs(inv * inv - std::norm(m.inverse_tilde));
    r.per_mode.push_back(m);
  }

  r.z = x.squaredNorm();
  r.z_tilde = x_tilde.squaredNorm();
  r.classical_error = (x - x_tilde).norm();
  r.residual = (a.entries() * x_tilde - b).norm();
  if (r.z_tilde > 0.0) {
    r.state_error = (x / x.norm() - x_tilde / x_tilde.norm()).norm();
  } else {
    r.state_error = 1.0;
  }
  return r;
}

}  // namespace

double ErrorReport::residual_from_modes_squared() const {
  double total = 0.0;
  for (const ModeError& m : per_mode) {
    total += std::norm(m.beta * (m.eigenvalue * m.inverse_tilde - 1.0));
  }
  return total;
}

ErrorReport error_report(const HermitianMatrix& a, const CVector& b, const HhlResult& result) {
  return build_report(a, b, result.decoded_solution, &result.modes);
}

ErrorReport error_report(const HermitianMatrix& a, const CVector& b, const CVector& x_tilde) {
  return build_report(a, b, x_tilde, nullptr);
}

double accuracy_budget(double kappa, double b_norm, double x_norm, double target) {
  for (double v : {kappa, b_norm, x_norm, target}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw PreconditionError("accuracy_budget inputs must be finite and > 0");
    }
  }
  return target / std::max(kappa * b_norm * b_norm, x_norm);
}

std::string_view to_string(CostVariant v) {
  switch (v) {
    case CostVariant::qpe:
      return "qpe";
    case CostVariant::base:
      return "base";
    case CostVariant::rescaled:
      return "rescaled";
    case CostVariant::thresholded:
      return "thresholded";
    case CostVariant::norm_aware:
      return "norm_aware";
  }
  return "unknown";
}

CostVariant cost_variant_from_string(std::string_view name) {
  for (CostVariant v : {CostVariant::qpe, CostVariant::base, CostVariant::rescaled,
                        CostVariant::thresholded, CostVariant::norm_aware}) {
    if (to_string(v) == name) return v;
  }
  throw PreconditionError("unknown cost variant '" + std::string(name) + "'");
}

double hhl_cost(const CostModel& model, CostVariant variant) {
  const double log_m = log_dimension(model);
  switch (variant) {
    case CostVariant::qpe: {
      const double delta = require(model.delta, "delta");
      return log_m / (require(model.epsilon, "epsilon") * std::pow(delta, require(model.gamma, "gamma")));
    }
    case CostVariant::base: {
      const double s = require(model.s, "s");
      const double kappa = require(model.kappa, "kappa");
      return log_m * s * s * kappa * kappa / require(model.epsilon, "epsilon");
    }
    case CostVariant::rescaled: {
      const double s = require(model.s, "s");
      const double t = require(model.t, "t");
      const double lambda = require(model.lambda_min, "lambda_min");
      return log_m * s * s / (t * t * lambda * lambda * require(model.epsilon, "epsilon"));
    }
    case CostVariant::thresholded: {
      const double s = require(model.s, "s");
      const double t = require(model.t, "t");
      const double mu = require(model.mu, "mu");
      return log_m * s * s / (t * t * mu * mu * require(model.epsilon, "epsilon"));
    }
    case CostVariant::norm_aware: {
      const double s = require(model.s, "s");
      const double kappa = require(model.kappa, "kappa");
      const double b = require(model.b_norm, "b_norm");
      const double x = require(model.x_norm, "x_norm");
      return log_m * s * s * kappa * kappa * std::max(kappa * b * b, x) /
             require(model.epsilon_target, "epsilon_target");
    }
  }
  throw PreconditionError("unknown cost variant");
}

double counting_cost(double n, double k, double epsilon) {
  if (!(n > 0.0) || !(k > 0.0) || !(epsilon > 0.0) || k > n) {
    throw PreconditionError("counting_cost needs 0 < K <= N and epsilon > 0");
  }
  return std::sqrt(n / k) / epsilon;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("loglog_slope needs two equal-length series of at least 2 points");
  }
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw PreconditionError("loglog_slope needs positive values");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - sx / n) * (lx[i] - sx / n);
    sxy += (lx[i] - sx / n) * (ly[i] - sy / n);
  }
  if (!(sxx > 0.0)) throw PreconditionError("loglog_slope needs at least two distinct x values");
  return sxy / sxx;
}

}  // namespace qcaveat
