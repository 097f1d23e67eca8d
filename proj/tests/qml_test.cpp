#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcaveat/error.hpp"
#include "qcaveat/qml.hpp"
#include "test_support.hpp"

using namespace qcaveat;
using qcaveat::testing::random_complex_matrix;
using qcaveat::testing::random_complex_vector;
using qcaveat::testing::random_unit_vector;

namespace {

constexpr double kPi = std::numbers::pi;

CVector basis(Eigen::Index n, Eigen::Index i) {
  CVector e = CVector::Zero(n);
  e(i) = 1.0;
  return e;
}

Dataset random_dataset(std::size_t m, Eigen::Index n, SplitMix64& rng) {
  std::vector<CVector> vs;
  for (std::size_t j = 0; j < m; ++j) vs.push_back(random_complex_vector(n, rng));
  return Dataset(vs);
}

}  // namespace

TEST_CASE("Dataset validation") {
  CHECK_THROWS_AS(Dataset({}), PreconditionError);
  CHECK_THROWS_AS(Dataset({CVector::Ones(2), CVector::Ones(3)}), PreconditionError);
  RVector labels(1);
  labels << 1.0;
  CHECK_THROWS_AS(Dataset({CVector::Ones(2), CVector::Ones(2)}, labels), PreconditionError);
  const Dataset d({CVector::Ones(2), CVector::Zero(2)});
  CHECK(d.mean().isApprox(CVector::Constant(2, 0.5)));
}

TEST_CASE("swap test probability matches the inner product") {
  SplitMix64 rng(21);
  const CVector a = random_unit_vector(5, rng);
  CHECK(swap_test_probability(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(swap_test_probability(basis(3, 0), basis(3, 2)) == doctest::Approx(0.5).epsilon(1e-12));
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(9));
    const CVector x = random_unit_vector(n, rng);
    const CVector y = random_unit_vector(n, rng);
    const double oracle = 0.5 + 0.5 * std::norm((x.adjoint() * y)(0, 0));
    CHECK(std::abs(swap_test_probability(x, y) - oracle) < 1e-12);
  }
  CHECK_THROWS_AS(swap_test_probability(CVector::Ones(2), basis(2, 0)), PreconditionError);
}

TEST_CASE("swap test calibration and bias") {
  SplitMix64 rng(22);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const CVector a = random_unit_vector(4, rng);
    const CVector b = random_unit_vector(4, rng);
    const auto r = swap_test(a, b, 100000, 1000 + trial);
    if (std::abs(r.overlap.value - *r.overlap.exact) <= r.overlap.confidence_halfwidth) ++covered;
  }
  CHECK(covered >= 95);

  const CVector a = random_unit_vector(3, rng);
  const CVector b = random_unit_vector(3, rng);
  const double truth = std::norm(a.dot(b));
  const std::uint64_t shots = 1000;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) mean += swap_test(a, b, shots, seed).unclamped;
  mean /= 1000.0;
  const double p = 0.5 + truth / 2.0;
  const double sigma = 2.0 * std::sqrt(p * (1.0 - p) / shots) / std::sqrt(1000.0);
  CHECK(std::abs(mean - truth) < 3.0 * sigma);

  CHECK(hoeffding_halfwidth(2.0, 10000) == doctest::Approx(2.0 * std::sqrt(std::log(40.0) / 20000.0)));
}

TEST_CASE("interference test recovers the complex overlap") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector a = random_unit_vector(4, rng);
    const CVector b = random_unit_vector(4, rng);
    const Complex exact = (a.adjoint() * b)(0, 0);
    CHECK(interference_probability(a, b, 0.0) == doctest::Approx(0.5 + exact.real() / 2.0));
    CHECK(interference_probability(a, b, -kPi / 2.0) == doctest::Approx(0.5 + exact.imag() / 2.0));
    const auto est = interference_test(a, b, 200000, trial);
    CHECK(std::abs(est.real.value - exact.real()) < est.real.confidence_halfwidth);
    CHECK(std::abs(est.imag.value - exact.imag()) < est.imag.confidence_halfwidth);
  }
}

TEST_CASE("regression_predict") {
  HhlConfig c;
  c.t = kPi / 2.0;
  c.clock_qubits = 3;
  SUBCASE("identity design, exact probabilities") {
    const auto r = regression_predict(CMatrix::Identity(2, 2), basis(2, 0), basis(2, 0), c, 0, 0);
    CHECK(std::abs(r.prediction - 1.0) < 1e-12);
    CHECK(std::abs(r.exact - 1.0) < 1e-12);
  }
  SUBCASE("random instance against the least-squares oracle") {
    SplitMix64 rng(24);
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix f = random_complex_matrix(6, 3, rng);
      const CVector b = random_complex_vector(6, rng);
      const CVector cv = random_complex_vector(3, rng);
      HhlConfig cfg;
      cfg.t = choose_time_scale(HermitianMatrix(f.adjoint() * f), {});
      cfg.clock_qubits = 12;
      const auto r = regression_predict(f, b, cv, cfg, 0, 0);
      const CVector x = f.colPivHouseholderQr().solve(b);
      const Complex oracle = (cv.adjoint() * x)(0, 0);
      CHECK(std::abs(r.exact - oracle) < 1e-9 * std::max(1.0, std::abs(oracle)));
      // Budget: |c^dagger (x~ - x)| <= |c| |x~ - x|, with |x~ - x| bounded by the
      // per-mode inverse error for a resolution of pi / (t N).
      const auto d = eig_hermitian(HermitianMatrix(f.adjoint() * f));
      const double delta = cfg.qpe().resolution();
      const double lmin = d.eigenvalues.cwiseAbs().minCoeff();
      const double budget = cv.norm() * (f.adjoint() * b).norm() * delta / (lmin * (lmin - delta));
      CHECK(r.prediction_error <= budget + 1e-12);
    }
  }
  SUBCASE("prediction error scales with |c|") {
    SplitMix64 rng(25);
    const CMatrix f = random_complex_matrix(4, 2, rng);
    const CVector b = random_complex_vector(4, rng);
    const CVector cv = random_complex_vector(2, rng);
    HhlConfig cfg;
    cfg.t = choose_time_scale(HermitianMatrix(f.adjoint() * f), {});
    cfg.clock_qubits = 4;
    const auto base = regression_predict(f, b, cv, cfg, 5000, 9);
    for (double scale : {10.0, 100.0}) {
      const auto r = regression_predict(f, b, scale * cv, cfg, 5000, 9);
      CHECK(r.state_error == doctest::Approx(base.state_error));
      CHECK(r.overlap_error == doctest::Approx(base.overlap_error));
      CHECK(r.prediction_error / base.prediction_error == doctest::Approx(scale).epsilon(1e-9));
      CHECK(r.amplification / base.amplification == doctest::Approx(scale).epsilon(1e-12));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(regression_predict(CMatrix::Identity(2, 2), basis(2, 0), CVector::Zero(2), c, 0, 0),
                    PreconditionError);
    CHECK_THROWS_AS(regression_predict(CMatrix::Identity(2, 2), basis(3, 0), basis(2, 0), c, 0, 0),
                    PreconditionError);
  }
}

TEST_CASE("classification_distance") {
  SplitMix64 rng(26);
  SUBCASE("query at the cluster mean") {
    const Dataset v = random_dataset(4, 3, rng);
    const auto r = classification_distance(v.mean(), v, 0.01, 1000, 1);
    CHECK(r.distance_exact < 1e-28);
    CHECK(*r.p.exact < 1e-28);
    CHECK(r.p.value == 0.0);
  }
  SUBCASE("single-point cluster") {
    const CVector u = random_complex_vector(3, rng);
    const CVector w = random_complex_vector(3, rng);
    const auto r = classification_distance(u, Dataset({w}), 0.01, 1000, 2);
    const double direct = (u - w).squaredNorm();
    CHECK(r.distance_exact == doctest::Approx(direct).epsilon(1e-13));
  }
  SUBCASE("identity 2 P Z^2 = |u - mean|^2 and the target state") {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t m = 1 + rng.below(6);
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(5));
      const Dataset v = random_dataset(m, n, rng);
      const CVector u = random_complex_vector(n, rng);
      double largest = u.norm();
      double z = u.squaredNorm();
      for (const CVector& x : v.vectors()) {
        largest = std::max(largest, x.norm());
        z += x.squaredNorm() / static_cast<double>(m);
      }
      CVector mean = CVector::Zero(n);
      for (const CVector& x : v.vectors()) mean += x / static_cast<double>(m);
      const double direct = (u - mean).squaredNorm();
      if (direct > 2.0 * z * z) continue;  // P would exceed 1
      const double t = 0.1 / largest;
      const auto r = classification_distance(u, v, t, 100, trial);
      CHECK(std::abs(2.0 * *r.p.exact * r.z * r.z - direct) <= 1e-10);
      CHECK(r.z == doctest::Approx(z).epsilon(1e-13));
      CHECK(r.target_state.norm() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(r.target_state(0).real() == doctest::Approx(u.norm() / std::sqrt(z)));
      for (std::size_t j = 0; j < m; ++j) {
        const double expect = -v.vectors()[j].norm() / std::sqrt(static_cast<double>(m) * z);
        CHECK(r.target_state(static_cast<Eigen::Index>(j) + 1).real() == doctest::Approx(expect));
      }
      // sin(x)/x deviates by x^2/6, so the prepared state is O((t max)^2) off.
      CHECK(r.preparation_error <= 0.1 * 0.1);
      CHECK(std::abs(*r.p1.exact - r.p1_first_order) <= r.p1_first_order * 0.1 * 0.1);
      CHECK(r.overlap_probability == doctest::Approx(*r.p.exact * r.z).epsilon(1e-12));
    }
  }
  SUBCASE("preconditions") {
    const Dataset v = random_dataset(2, 3, rng);
    const CVector u = random_complex_vector(3, rng);
    CHECK_THROWS_AS(classification_distance(u, v, 10.0, 100, 1), PreconditionError);
    CHECK_THROWS_AS(classification_distance(u, v, 0.01, 0, 1), PreconditionError);
    CHECK_THROWS_AS(classification_distance(random_complex_vector(2, rng), v, 0.01, 10, 1),
                    PreconditionError);
  }
}

TEST_CASE("trace_estimate") {
  SUBCASE("identity") {
    const auto r = trace_estimate(HermitianMatrix::identity(8), 100, 1);
    CHECK(r.normalized.value == 1.0);
    CHECK(r.total.value == 8.0);
    CHECK(r.total.confidence_halfwidth == 0.0);
  }
  SUBCASE("Gram trace identity and coverage") {
    SplitMix64 rng(27);
    const Dataset x = random_dataset(12, 3, rng);
    const auto k = gram_matrix(x);
    double norms = 0.0;
    for (const CVector& v : x.vectors()) norms += v.squaredNorm();
    int covered = 0;
    for (int seed = 0; seed < 100; ++seed) {
      const auto r = trace_estimate(k, 2000, seed);
      CHECK(*r.total.exact == doctest::Approx(norms).epsilon(1e-13));
      CHECK(r.total.confidence_halfwidth == doctest::Approx(12.0 * r.normalized.confidence_halfwidth));
      if (std::abs(r.total.value - norms) <= r.total.confidence_halfwidth) ++covered;
    }
    CHECK(covered >= 95);
  }
  SUBCASE("indefinite input is rejected") {
    RVector d(2);
    d << 1.0, -1.0;
    CHECK_THROWS_AS(trace_estimate(HermitianMatrix::diagonal(d), 10, 1), PreconditionError);
  }
}

TEST_CASE("build_lssvm_system") {
  SUBCASE("single point") {
    RVector y(1);
    y << 0.7;
    const auto s = build_lssvm_system(Dataset({basis(3, 1)}), y, 1.0);
    CMatrix expect(2, 2);
    expect << 0, 1, 1, 2;
    CHECK(max_abs_diff(s.f.entries(), expect) == 0.0);
    CHECK(s.rhs(0) == 0.0);
    CHECK(s.rhs(1) == 0.7);
  }
  SUBCASE("orthonormal points give an identity kernel block") {
    const Dataset x({basis(4, 0), basis(4, 1), basis(4, 2)});
    const auto s = build_lssvm_system(x, RVector::Ones(3), 0.5);
    const CMatrix block = s.f.entries().block(1, 1, 3, 3) - 2.0 * CMatrix::Identity(3, 3);
    CHECK(max_abs_diff(block, CMatrix::Identity(3, 3)) < 1e-15);
  }
  SUBCASE("hhl_ideal solve agrees with a direct solve") {
    SplitMix64 rng(28);
    for (int trial = 0; trial < 10; ++trial) {
      const Dataset x = random_dataset(3, 2, rng);
      RVector y(3);
      for (int i = 0; i < 3; ++i) y(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
      const auto s = build_lssvm_system(x, y, 2.0);
      CHECK(max_abs_diff(s.f.entries(), s.f.entries().adjoint()) == 0.0);
      const auto kernel = eig_hermitian(HermitianMatrix(s.f.entries().block(1, 1, 3, 3) -
                                                        0.5 * CMatrix::Identity(3, 3)));
      CHECK(kernel.eigenvalues.minCoeff() >= -1e-12);

      const CVector rhs = s.rhs.cast<Complex>();
      const CVector direct = s.f.entries().lu().solve(rhs);
      HhlConfig c;
      c.t = choose_time_scale(s.f, {});
      c.clock_qubits = 12;
      const auto r = hhl_ideal(s.f, rhs, c);
      const auto d = eig_hermitian(s.f);
      const double delta = c.qpe().resolution();
      const double lmin = d.eigenvalues.cwiseAbs().minCoeff();
      REQUIRE(lmin > delta);
      CHECK((r.decoded_solution - direct).norm() <= rhs.norm() * delta / (lmin * (lmin - delta)));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_lssvm_system(Dataset({basis(2, 0)}), RVector::Ones(2), 1.0),
                    PreconditionError);
    CHECK_THROWS_AS(build_lssvm_system(Dataset({basis(2, 0)}), RVector::Ones(1), 0.0),
                    PreconditionError);
  }
}
