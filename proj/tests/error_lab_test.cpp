#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "qcaveat/error.hpp"
#include "qcaveat/error_lab.hpp"
#include "test_support.hpp"

using namespace qcaveat;
using qcaveat::testing::hermitian_with_spectrum;
using qcaveat::testing::random_complex_vector;
using qcaveat::testing::random_hermitian;

namespace {

constexpr double kPi = std::numbers::pi;

CostModel unit_model() {
  CostModel m;
  m.m = 2.0;
  m.s = 1.0;
  m.kappa = 1.0;
  m.epsilon = 1.0;
  m.delta = 1.0;
  m.t = 1.0;
  m.mu = 1.0;
  m.gamma = 1.0;
  m.lambda_min = 1.0;
  m.b_norm = 1.0;
  m.x_norm = 1.0;
  m.epsilon_target = 1.0;
  return m;
}

}  // namespace

TEST_CASE("error_report on an exact solve is all zeros") {
  SplitMix64 rng(11);
  const auto a = random_hermitian(4, rng);
  const CVector b = random_complex_vector(4, rng);
  const CVector x = a.entries().lu().solve(b);
  const auto r = error_report(a, b, x);
  CHECK(r.state_error < 1e-10);
  CHECK(r.classical_error < 1e-10 * x.norm());
  CHECK(r.residual < 1e-10 * b.norm());
  CHECK(r.z == doctest::Approx(r.z_tilde).epsilon(1e-10));
  CHECK(r.z == doctest::Approx(x.squaredNorm()).epsilon(1e-10));
  CHECK_FALSE(r.filtered_modes);
}

TEST_CASE("error_report on the diagonal threshold instance") {
  RVector diag(5);
  diag << 1.0, -0.75, 0.5, -0.25, 0.125;
  CVector b(5);
  b << 0.3, Complex(-0.2, 0.4), 0.9, Complex(0.1, 0.1), -0.6;
  const HermitianMatrix a = HermitianMatrix::diagonal(diag);
  HhlConfig c;
  c.t = kPi / 2.0;
  c.clock_qubits = 5;
  c.mu = 0.3;
  const auto result = hhl_ideal(a, b, c);
  const auto r = error_report(a, b, result);

  // Direct oracle: A x~ - b vanishes on kept coordinates and is -b_j elsewhere.
  CVector direct = diag.cast<Complex>().asDiagonal() * result.decoded_solution - b;
  const double dropped = std::norm(b(3)) + std::norm(b(4));
  CHECK(std::abs(direct.squaredNorm() - dropped) < 1e-12);
  CHECK(std::abs(r.residual * r.residual - dropped) < 1e-10);
  CHECK(std::abs(r.residual_from_modes_squared() - dropped) < 1e-10);
  CHECK(r.filtered_modes);
  int filtered = 0;
  for (const auto& m : r.per_mode) {
    if (!m.kept) {
      ++filtered;
      CHECK(std::abs(m.inverse_tilde) == 0.0);
    }
  }
  CHECK(filtered == 2);
}

TEST_CASE("error_report for a single perturbed mode") {
  const double eps = 0.03;
  CVector b(1);
  b << Complex(0.6, -0.8);
  // lambda = 1 estimated as 1 + eps: x~ = b / (1 + eps).
  const CVector x_tilde = b / (1.0 + eps);
  const auto r = error_report(HermitianMatrix::identity(1), b, x_tilde);
  CHECK(r.residual == doctest::Approx(eps / (1.0 + eps)).epsilon(1e-12));
  CHECK(r.classical_error == doctest::Approx(eps / (1.0 + eps)).epsilon(1e-12));
  CHECK(r.state_error < 1e-12);
  CHECK(r.max_inverse_error == doctest::Approx(eps / (1.0 + eps)).epsilon(1e-12));
}

TEST_CASE("ledger identities hold on ideal and circuit results") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index dim = trial % 2 == 0 ? 2 : 4;
    RVector spectrum(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      spectrum(j) = (0.2 + 0.8 * rng.uniform()) * (rng.below(2) == 0 ? 1.0 : -1.0);
    }
    const auto a = hermitian_with_spectrum(spectrum, rng);
    const CVector b = random_complex_vector(dim, rng);
    HhlConfig c;
    c.t = choose_time_scale(a, {});
    c.clock_qubits = 3 + static_cast<int>(rng.below(4));
    c.mu = trial % 3 == 0 ? 0.3 : 0.0;
    for (bool circuit : {false, true}) {
      std::optional<HhlResult> result;
      try {
        result.emplace(circuit ? hhl_circuit(a, b, c) : hhl_ideal(a, b, c));
      } catch (const EmptySolutionError&) {
        continue;
      }
      const auto r = error_report(a, b, *result);
      CHECK(std::abs(r.residual * r.residual - r.residual_from_modes_squared()) <= 1e-10);
      CHECK(std::abs(r.z - r.z_tilde) <= r.z_gap_bound + 1e-12);
      // |x - x~|^2 = Z~ + Z - 2 sqrt(Z Z~) Re<x|x~>, and Re<x|x~> = 1 - state_error^2 / 2.
      const double chain = r.z_tilde + r.z -
                           2.0 * std::sqrt(r.z * r.z_tilde) * (1.0 - r.state_error * r.state_error / 2.0);
      CHECK(r.classical_error * r.classical_error <= chain + 1e-10);
      CHECK(r.classical_error * r.classical_error >= chain - 1e-10);
    }
  }
}

TEST_CASE("error_report preconditions") {
  CHECK_THROWS_AS(error_report(HermitianMatrix::identity(2), CVector::Ones(3), CVector::Ones(2)),
                  PreconditionError);
  RVector d(2);
  d << 1.0, 0.0;
  CHECK_THROWS_AS(error_report(HermitianMatrix::diagonal(d), CVector::Ones(2), CVector::Ones(2)),
                  SingularMatrixError);
}

TEST_CASE("accuracy_budget") {
  CHECK(accuracy_budget(1.0, 1.0, 1.0, 0.01) == doctest::Approx(0.01));
  CHECK(accuracy_budget(100.0, 1.0, 5.0, 0.01) == doctest::Approx(1e-4));
  CHECK(accuracy_budget(1.0, 1.0, 20.0, 0.01) ==
        doctest::Approx(accuracy_budget(1.0, 1.0, 10.0, 0.01) / 2.0));
  SplitMix64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const double k = 1.0 + 100.0 * rng.uniform();
    const double b = 0.1 + 3.0 * rng.uniform();
    const double x = 0.1 + 100.0 * rng.uniform();
    const double e = 1e-3 + rng.uniform();
    const double base = accuracy_budget(k, b, x, e);
    CHECK(accuracy_budget(k * 1.5, b, x, e) <= base);
    CHECK(accuracy_budget(k, b * 1.5, x, e) <= base);
    CHECK(accuracy_budget(k, b, x * 1.5, e) <= base);
    CHECK(accuracy_budget(k, b, x, 3.0 * e) == doctest::Approx(3.0 * base).epsilon(1e-14));
  }
  CHECK_THROWS_AS(accuracy_budget(0.0, 1.0, 1.0, 1.0), PreconditionError);
}

TEST_CASE("hhl_cost formulas") {
  const CostModel unit = unit_model();
  CHECK(hhl_cost(unit, CostVariant::base) == doctest::Approx(std::log(2.0)));

  CostModel m = unit;
  m.m = 64.0;
  m.s = 3.0;
  m.kappa = 20.0;
  m.epsilon = 0.01;
  m.t = 0.4;
  m.lambda_min = 0.05;
  m.mu = 0.05;
  m.delta = 0.02;
  m.gamma = 2.0;
  m.b_norm = 1.5;
  m.x_norm = 70.0;
  m.epsilon_target = 0.2;
  const double log_m = std::log(64.0);
  CHECK(hhl_cost(m, CostVariant::qpe) == doctest::Approx(log_m / (0.01 * 0.02 * 0.02)));
  CHECK(hhl_cost(m, CostVariant::rescaled) ==
        doctest::Approx(log_m * 9.0 / (0.16 * 0.0025 * 0.01)));
  CHECK(hhl_cost(m, CostVariant::thresholded) == hhl_cost(m, CostVariant::rescaled));

  const double ratio = hhl_cost(m, CostVariant::norm_aware) / hhl_cost(m, CostVariant::base);
  CHECK(ratio == doctest::Approx(std::max(20.0 * 2.25, 70.0) / 0.2 * 0.01).epsilon(1e-14));

  CostModel half = m;
  half.t = 0.2;
  CHECK(hhl_cost(half, CostVariant::rescaled) / hhl_cost(m, CostVariant::rescaled) ==
        doctest::Approx(4.0).epsilon(1e-14));

  for (CostVariant v : {CostVariant::qpe, CostVariant::base, CostVariant::rescaled,
                        CostVariant::thresholded}) {
    CostModel tighter = m;
    tighter.epsilon = 0.005;
    CHECK(hhl_cost(tighter, v) > hhl_cost(m, v));
    CHECK(cost_variant_from_string(to_string(v)) == v);
  }
  CostModel missing = m;
  missing.mu.reset();
  CHECK_THROWS_AS(hhl_cost(missing, CostVariant::thresholded), PreconditionError);
  CostModel negative = m;
  negative.s = -1.0;
  CHECK_THROWS_AS(hhl_cost(negative, CostVariant::base), PreconditionError);
  CostModel tiny = m;
  tiny.m = 1.0;
  CHECK_THROWS_AS(hhl_cost(tiny, CostVariant::base), PreconditionError);
  CHECK_THROWS_AS(cost_variant_from_string("eq11"), PreconditionError);
}

TEST_CASE("counting_cost crossover") {
  for (double n : {1e4, 1e6}) {
    for (double k : {1.0, 10.0, 100.0}) {
      CHECK(counting_cost(n, k, 1.0 / k) == doctest::Approx(std::sqrt(n * k)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(counting_cost(10.0, 20.0, 0.1), PreconditionError);
}

TEST_CASE("loglog_slope agrees with the textbook formula") {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 6; ++i) {
      x.push_back(0.1 + 10.0 * rng.uniform());
      y.push_back(0.1 + 10.0 * rng.uniform());
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(qcaveat::testing::loglog_slope(x, y)).epsilon(1e-9));
  }
  CHECK(loglog_slope({1.0, 10.0, 100.0}, {3.0, 300.0, 30000.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), PreconditionError);
  CHECK_THROWS_AS(loglog_slope({1.0, 1.0}, {1.0, 2.0}), PreconditionError);
}
