#include "qcaveat/qml.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcaveat/error.hpp"
#include "qcaveat/rng.hpp"
#include "qcaveat/statevector.hpp"

namespace qcaveat {

namespace {

constexpr double kUnitTolerance = 1e-8;
const double kHoeffdingLog = std::log(2.0 / 0.05);

int width_for(Eigen::Index n) {
  int w = 1;
  while ((Eigen::Index{1} << w) < n) ++w;
  return w;
}

CVector padded(const CVector& v, int width) {
  CVector out = CVector::Zero(Eigen::Index{1} << width);
  out.head(v.size()) = v;
  return out;
}

void require_unit_pair(const CVector& a, const CVector& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw PreconditionError("overlap estimators need two vectors of equal, nonzero length");
  }
  if (std::abs(a.norm() - 1.0) > kUnitTolerance || std::abs(b.norm() - 1.0) > kUnitTolerance) {
    throw PreconditionError("overlap estimators need unit vectors");
  }
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64::substream(seed, stream)();
}

// Fraction of `shots` Bernoulli(p) trials that succeed.
double sampled_fraction(double p, std::uint64_t shots, std::uint64_t seed) {
  const std::uint64_t hits = sample_binomial(std::clamp(p, 0.0, 1.0), shots, seed);
  return static_cast<double>(hits) / static_cast<double>(shots);
}

}  // namespace

Dataset::Dataset(std::vector<CVector> vectors, std::optional<RVector> labels)
    : vectors_(std::move(vectors)), labels_(std::move(labels)) {
  if (vectors_.empty()) throw PreconditionError("dataset needs at least one vector");
  const Eigen::Index n = vectors_.front().size();
  if (n < 1) throw PreconditionError("dataset vectors must have dimension >= 1");
  for (const CVector& v : vectors_) {
    if (v.size() != n) throw PreconditionError("dataset vectors must share one dimension");
    if (!v.allFinite()) throw PreconditionError("dataset vectors must be finite");
  }
  if (labels_ && static_cast<std::size_t>(labels_->size()) != vectors_.size()) {
    throw PreconditionError("dataset labels must match the number of vectors");
  }
}

CVector Dataset::mean() const {
  CVector m = CVector::Zero(dim());
  for (const CVector& v : vectors_) m += v;
  return m / static_cast<double>(vectors_.size());
}

double hoeffding_halfwidth(double range, std::uint64_t shots) {
  if (shots == 0) throw PreconditionError("shots must be >= 1");
  return range * std::sqrt(kHoeffdingLog / (2.0 * static_cast<double>(shots)));
}

double swap_test_probability(const CVector& a, const CVector& b) {
  require_unit_pair(a, b);
  const int w = width_for(a.size());
  if (2 * w + 1 > kMaxQubits) throw PreconditionError("swap test vectors are too long to simulate");
  const RegisterLayout layout{{"ancilla", 1}, {"left", w}, {"right", w}};
  const CVector pa = padded(a, w);
  const CVector pb = padded(b, w);
  const std::uint64_t half = std::uint64_t{1} << w;

  CVector initial = CVector::Zero(static_cast<Eigen::Index>(layout.dim()));
  for (std::uint64_t i = 0; i < half; ++i) {
    for (std::uint64_t j = 0; j < half; ++j) {
      initial(static_cast<Eigen::Index>((i << w) | j)) =
          pa(static_cast<Eigen::Index>(i)) * pb(static_cast<Eigen::Index>(j));
    }
  }
  QuantumState state = hadamard_transform(prepare_state(layout, initial), "ancilla");

  // Controlled swap of the two data registers on ancilla = 1.
  CVector swapped = state.amplitudes();
  const std::uint64_t top = std::uint64_t{1} << (2 * w);
  for (std::uint64_t i = 0; i < half; ++i) {
    for (std::uint64_t j = 0; j < half; ++j) {
      swapped(static_cast<Eigen::Index>(top | (i << w) | j)) =
          state.amplitude(top | (j << w) | i);
    }
  }
  state = hadamard_transform(prepare_state(layout, swapped), "ancilla");
  return measure(state, "ancilla")[0];
}

SwapTestResult swap_test(const CVector& a, const CVector& b, std::uint64_t shots,
                         std::uint64_t seed) {
  const double p = swap_test_probability(a, b);
  const double p_hat = sampled_fraction(p, shots, seed);
  SwapTestResult r;
  r.acceptance_probability = p;
  r.unclamped = 2.0 * p_hat - 1.0;
  r.overlap.value = std::clamp(r.unclamped, 0.0, 1.0);
  r.overlap.shots = shots;
  r.overlap.confidence_halfwidth = hoeffding_halfwidth(2.0, shots);
  r.overlap.exact = std::norm(a.dot(b));
  return r;
}

double interference_probability(const CVector& a, const CVector& b, double theta) {
  require_unit_pair(a, b);
  const int w = width_for(a.size());
  const RegisterLayout layout{{"ancilla", 1}, {"data", w}};
  const Eigen::Index half = Eigen::Index{1} << w;
  CVector initial = CVector::Zero(2 * half);
  initial.head(half) = padded(a, w) / std::sqrt(2.0);
  initial.tail(half) = std::polar(1.0 / std::sqrt(2.0), theta) * padded(b, w);
  const QuantumState state = hadamard_transform(prepare_state(layout, initial), "ancilla");
  return measure(state, "ancilla")[0];
}

OverlapEstimate interference_test(const CVector& a, const CVector& b, std::uint64_t shots,
                                  std::uint64_t seed) {
  const Complex exact = a.dot(b);
  OverlapEstimate out;
  const double angles[2] = {0.0, -std::numbers::pi / 2.0};
  ShotEstimate* parts[2] = {&out.real, &out.imag};
  for (int k = 0; k < 2; ++k) {
    const double p = interference_probability(a, b, angles[k]);
    parts[k]->value = 2.0 * sampled_fraction(p, shots, stream_seed(seed, k)) - 1.0;
    parts[k]->shots = shots;
    parts[k]->confidence_halfwidth = hoeffding_halfwidth(2.0, shots);
  }
  out.real.exact = exact.real();
  out.imag.exact = exact.imag();
  return out;
}

RegressionPrediction regression_predict(const CMatrix& f, const CVector& b, const CVector& c,
                                        const HhlConfig& config, std::uint64_t shots,
                                        std::uint64_t seed) {
  if (b.size() != f.rows() || c.size() != f.cols()) {
    throw PreconditionError("regression: F, b and c dimensions do not match");
  }
  if (!(c.norm() > 0.0)) throw PreconditionError("regression: c must be nonzero");
  const HermitianMatrix normal(f.adjoint() * f);
  const CVector rhs = f.adjoint() * b;
  const HhlResult hhl = hhl_ideal(normal, rhs, config);
  const ThresholdedSolution oracle = thresholded_solve(normal, rhs, 0.0);

  const CVector& x_tilde = hhl.decoded_solution;
  const CVector c_unit = c / c.norm();
  const CVector x_unit = oracle.x / oracle.x.norm();
  const CVector xt_unit = x_tilde / x_tilde.norm();

  RegressionPrediction r;
  r.exact = c.dot(oracle.x);
  r.overlap_exact = c_unit.dot(x_unit);
  r.x_norm = oracle.x.norm();
  r.x_tilde_norm = x_tilde.norm();
  r.amplification = c.norm() * r.x_norm;
  r.state_error = (x_unit - xt_unit).norm();

  if (shots == 0) {
    r.overlap_estimate = c_unit.dot(xt_unit);
  } else {
    const SwapTestResult swap = swap_test(c_unit, xt_unit, shots, stream_seed(seed, 0));
    const OverlapEstimate phase = interference_test(c_unit, xt_unit, shots, stream_seed(seed, 1));
    const double magnitude = std::sqrt(swap.overlap.value);
    const double angle = std::abs(phase.value()) > 0.0 ? std::arg(phase.value()) : 0.0;
    r.overlap_estimate = std::polar(magnitude, angle);
  }
  r.prediction = c.norm() * r.x_tilde_norm * r.overlap_estimate;
  r.overlap_error = std::abs(r.overlap_estimate - r.overlap_exact);
  r.prediction_error = std::abs(r.prediction - r.exact);
  return r;
}

ClassificationEstimate classification_distance(const CVector& u, const Dataset& v, double t,
                                               std::uint64_t shots, std::uint64_t seed) {
  if (u.size() != v.dim()) throw PreconditionError("query and cluster dimensions differ");
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("t must be finite and > 0");
  if (shots == 0) throw PreconditionError("shots must be >= 1");

  const auto m = static_cast<Eigen::Index>(v.size());
  const double mm = static_cast<double>(m);
  RVector norms(m);
  for (Eigen::Index j = 0; j < m; ++j) norms(j) = v.vectors()[static_cast<std::size_t>(j)].norm();
  const double u_norm = u.norm();
  const double largest = std::max(u_norm, norms.maxCoeff());
  if (t * largest > kMaxClassificationAngle * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "t * max norm = " << t * largest << " exceeds " << kMaxClassificationAngle
        << "; shrink t or rescale the data";
    throw PreconditionError(msg.str());
  }

  ClassificationEstimate r;
  r.z = u_norm * u_norm + norms.squaredNorm() / mm;
  if (!(r.z > 0.0)) throw PreconditionError("query and cluster are all zero");
  r.distance_exact = (u - v.mean()).squaredNorm();
  const double p = r.distance_exact / (2.0 * r.z * r.z);
  if (p > 1.0) {
    std::ostringstream msg;
    msg << "P = |u - mean|^2 / (2 Z^2) = " << p << " exceeds 1; rescale the data so Z is larger";
    throw PreconditionError(msg.str());
  }
  r.overlap_probability = r.distance_exact / (2.0 * r.z);
  r.amplification = 2.0 * r.z * r.z;

  r.target_state = CVector(m + 1);
  r.prepared_state = CVector(m + 1);
  r.target_state(0) = u_norm;
  r.prepared_state(0) = std::sin(u_norm * t);
  double p1 = std::norm(std::sin(u_norm * t));
  for (Eigen::Index j = 0; j < m; ++j) {
    r.target_state(j + 1) = -norms(j) / std::sqrt(mm);
    r.prepared_state(j + 1) = -std::sin(norms(j) * t) / std::sqrt(mm);
    p1 += std::norm(std::sin(norms(j) * t)) / mm;
  }
  p1 /= 2.0;
  r.target_state /= std::sqrt(r.z);
  r.prepared_state /= r.prepared_state.norm();
  r.preparation_error = (r.prepared_state - r.target_state).norm();
  r.p1_first_order = r.z * t * t / 2.0;

  r.p1.value = sampled_fraction(p1, shots, stream_seed(seed, 0));
  r.p1.shots = shots;
  r.p1.confidence_halfwidth = hoeffding_halfwidth(1.0, shots);
  r.p1.exact = p1;

  r.p.value = sampled_fraction(p, shots, stream_seed(seed, 1));
  r.p.shots = shots;
  r.p.confidence_halfwidth = hoeffding_halfwidth(1.0, shots);
  r.p.exact = p;

  r.z_estimate = 2.0 * r.p1.value / (t * t);
  r.distance_estimate = 2.0 * r.p.value * r.z_estimate * r.z_estimate;
  r.distance_error = std::abs(r.distance_estimate - r.distance_exact);
  return r;
}

TraceEstimate trace_estimate(const HermitianMatrix& k, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw PreconditionError("shots must be >= 1");
  const RVector diag = k.entries().diagonal().real();
  const double scale = std::max(1.0, k.entries().cwiseAbs().maxCoeff());
  const Eigen::LDLT<CMatrix> ldlt(k.entries());
  // Exact zero pivots of a rank-deficient kernel make info() report an
  // issue, so only the sign of D is checked.
  if (ldlt.vectorD().real().minCoeff() < -1e-10 * scale * static_cast<double>(k.dim())) {
    throw PreconditionError("trace_estimate needs a positive semidefinite matrix");
  }

  SplitMix64 rng(seed);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    sum += diag(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(k.dim()))));
  }
  const double m = static_cast<double>(k.dim());
  const double range = diag.maxCoeff() - diag.minCoeff();

  TraceEstimate r;
  r.normalized.value = sum / static_cast<double>(shots);
  r.normalized.shots = shots;
  r.normalized.confidence_halfwidth = hoeffding_halfwidth(range, shots);
  r.normalized.exact = diag.sum() / m;
  r.total.value = m * r.normalized.value;
  r.total.shots = shots;
  r.total.confidence_halfwidth = m * r.normalized.confidence_halfwidth;
  r.total.exact = diag.sum();
  return r;
}

HermitianMatrix gram_matrix(const Dataset& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  CMatrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      k(i, j) = x.vectors()[static_cast<std::size_t>(i)].dot(x.vectors()[static_cast<std::size_t>(j)]);
      k(j, i) = std::conj(k(i, j));
    }
    k(i, i) = k(i, i).real();
  }
  return HermitianMatrix(k);
}

LssvmSystem build_lssvm_system(const Dataset& x, const RVector& y, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw PreconditionError("gamma must be > 0");
  const auto n = static_cast<Eigen::Index>(x.size());
  if (y.size() != n) throw PreconditionError("label vector length must match the dataset size");
  CMatrix f = CMatrix::Zero(n + 1, n + 1);
  f.block(0, 1, 1, n).setOnes();
  f.block(1, 0, n, 1).setOnes();
  f.block(1, 1, n, n) = gram_matrix(x).entries() + CMatrix::Identity(n, n) / gamma;
  RVector rhs(n + 1);
  rhs(0) = 0.0;
  rhs.tail(n) = y;
  return {HermitianMatrix(f), rhs};
}

}  // namespace qcaveat
