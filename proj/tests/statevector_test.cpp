#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcaveat/error.hpp"
#include "qcaveat/statevector.hpp"
#include "test_support.hpp"

using namespace qcaveat;
using qcaveat::testing::random_unit_vector;
using qcaveat::testing::random_unitary;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

double state_distance(const QuantumState& a, const QuantumState& b) {
  return (a.amplitudes() - b.amplitudes()).norm();
}

QuantumState random_state(const RegisterLayout& layout, SplitMix64& rng) {
  return prepare_state(layout, random_unit_vector(static_cast<Eigen::Index>(layout.dim()), rng));
}

}  // namespace

TEST_CASE("register layout bookkeeping") {
  const RegisterLayout layout{{"ancilla", 1}, {"clock", 3}, {"system", 2}};
  CHECK(layout.num_qubits() == 6);
  CHECK(layout.slot("system").shift == 0);
  CHECK(layout.slot("clock").shift == 2);
  CHECK(layout.slot("ancilla").shift == 5);
  CHECK_THROWS_AS(layout.slot("missing"), PreconditionError);
  CHECK_THROWS_AS((RegisterLayout{{"a", 1}, {"a", 2}}), PreconditionError);
  CHECK_THROWS_AS((RegisterLayout{{"a", 0}}), PreconditionError);
  CHECK_THROWS_AS((RegisterLayout{{"a", 12}, {"b", 11}}), PreconditionError);
}

TEST_CASE("prepare_state") {
  const RegisterLayout one{{"system", 1}};
  SUBCASE("basis and plus states") {
    CVector zero(2);
    zero << 1, 0;
    const auto s0 = prepare_state(one, zero);
    CHECK(s0.amplitude(0) == Complex(1.0));
    CHECK(measure(s0, "system")[0] == doctest::Approx(1.0));

    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto table = measure(prepare_state(one, plus), "system");
    CHECK(table[0] == doctest::Approx(0.5));
    CHECK(table[1] == doctest::Approx(0.5));
  }
  SUBCASE("random 8-vector stored verbatim") {
    SplitMix64 rng(4);
    const CVector v = random_unit_vector(8, rng);
    const auto s = prepare_state(RegisterLayout{{"clock", 2}, {"system", 1}}, v);
    CHECK((s.amplitudes() - v).norm() < 1e-15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(prepare_state(one, CVector::Zero(2)), PreconditionError);
    CHECK_THROWS_AS(prepare_state(one, CVector::Ones(4) / 2.0), PreconditionError);
    CHECK_THROWS_AS(prepare_state(one, CVector::Ones(2)), PreconditionError);  // norm sqrt 2
  }
}

TEST_CASE("apply_controlled_power") {
  const RegisterLayout layout{{"clock", 2}, {"system", 1}};
  SUBCASE("identity leaves the state alone") {
    SplitMix64 rng(8);
    const auto s = random_state(layout, rng);
    CHECK(state_distance(apply_controlled_power(s, CMatrix::Identity(2, 2), "clock"), s) < 1e-15);
  }
  SUBCASE("phase kickback on the |1> branch") {
    const double theta = 0.37;
    CMatrix u = CMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, theta);
    // clock |01> (value 1), system |1> (eigenvector with eigenvalue e^{i theta}).
    const auto s = basis_state(layout, 0b011);
    const auto out = apply_controlled_power(s, u, "clock");
    CHECK(std::abs(out.amplitude(0b011) - std::polar(1.0, theta)) < 1e-15);
  }
  SUBCASE("uniform clock, U = diag(1, i), system |1>") {
    CMatrix u = CMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = kI;
    const auto clock = hadamard_transform(basis_state(RegisterLayout{{"clock", 2}}, 0), "clock");
    const auto s = tensor_product(clock, basis_state(RegisterLayout{{"system", 1}}, 1));
    const auto out = apply_controlled_power(s, u, "clock");
    // Direct product oracle: amplitude of |x>|1> is i^x / 2.
    const Complex expected[4] = {1.0, kI, -1.0, -kI};
    for (int x = 0; x < 4; ++x) {
      CHECK(std::abs(out.amplitude((x << 1) | 1) - expected[x] / 2.0) < 1e-15);
      CHECK(std::abs(out.amplitude(x << 1)) < 1e-15);
    }
  }
  SUBCASE("matches explicit U^x on every branch") {
    SplitMix64 rng(12);
    const RegisterLayout big{{"clock", 3}, {"system", 2}};
    const CMatrix u = random_unitary(4, rng);
    const auto s = random_state(big, rng);
    const auto out = apply_controlled_power(s, u, "clock");
    CMatrix power = CMatrix::Identity(4, 4);
    for (int x = 0; x < 8; ++x) {
      const CVector in = s.amplitudes().segment(4 * x, 4);
      CHECK((out.amplitudes().segment(4 * x, 4) - power * in).norm() < 1e-12);
      power = u * power;
    }
  }
  SUBCASE("U then U-dagger composes to identity") {
    SplitMix64 rng(13);
    const RegisterLayout big{{"clock", 4}, {"system", 2}};
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix u = random_unitary(4, rng);
      const auto s = random_state(big, rng);
      const auto back =
          apply_controlled_power(apply_controlled_power(s, u, "clock"), u.adjoint(), "clock");
      CHECK(state_distance(back, s) < 1e-9);
    }
  }
  SUBCASE("validation") {
    const auto s = basis_state(layout, 0);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 0) = 1.1;
    CHECK_THROWS_AS(apply_controlled_power(s, bad, "clock"), PreconditionError);
    CHECK_THROWS_AS(apply_controlled_power(s, CMatrix::Identity(4, 4), "clock"),
                    PreconditionError);
    CHECK_THROWS_AS(apply_controlled_power(s, CMatrix::Identity(2, 2), "clock", "clock"),
                    PreconditionError);
  }
}

TEST_CASE("inverse_qft") {
  const RegisterLayout reg{{"clock", 3}};
  SUBCASE("uniform maps to |0>") {
    const auto uniform = prepare_state(reg, CVector::Ones(8) / std::sqrt(8.0));
    const auto out = inverse_qft(uniform, "clock");
    CHECK(std::abs(out.amplitude(0) - Complex(1.0)) < 1e-14);
  }
  SUBCASE("|0> maps to uniform") {
    const auto out = inverse_qft(basis_state(reg, 0), "clock");
    for (int y = 0; y < 8; ++y) CHECK(std::abs(out.amplitude(y) - 1.0 / std::sqrt(8.0)) < 1e-15);
  }
  SUBCASE("Fourier basis vector maps to |3>") {
    CVector v(8);
    for (int x = 0; x < 8; ++x) v(x) = std::polar(1.0 / std::sqrt(8.0), 2.0 * kPi * x * 3 / 8.0);
    const auto out = inverse_qft(prepare_state(reg, v), "clock");
    CHECK(std::abs(out.amplitude(3) - Complex(1.0)) < 1e-14);
    CHECK(measure(out, "clock")[3] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("qft undoes inverse_qft on a sub-register") {
    SplitMix64 rng(21);
    const RegisterLayout big{{"a", 2}, {"clock", 3}, {"b", 1}};
    for (int trial = 0; trial < 5; ++trial) {
      const auto s = random_state(big, rng);
      CHECK(state_distance(qft(inverse_qft(s, "clock"), "clock"), s) < 1e-10);
    }
  }
}

TEST_CASE("operations preserve the norm") {
  SplitMix64 rng(31);
  const RegisterLayout layout{{"ancilla", 1}, {"clock", 3}, {"system", 2}};
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_state(layout, rng);
    s = hadamard_transform(s, "clock");
    s = apply_controlled_power(s, random_unitary(4, rng), "clock");
    s = inverse_qft(s, "clock");
    s = apply_conditional(s, "clock", "ancilla", [&](std::uint64_t x) -> std::optional<CMatrix> {
      if (x % 2 == 0) return std::nullopt;
      return random_unitary(2, rng);
    });
    CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-10);
    CHECK(measure(s, "clock").total() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("measure is independent of the order of other registers") {
  SplitMix64 rng(41);
  const RegisterLayout layout{{"a", 1}, {"clock", 2}, {"b", 2}};
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_state(layout, rng);
    const auto base = measure(s, "clock");
    for (const auto& order : std::vector<std::vector<std::string>>{
             {"b", "clock", "a"}, {"clock", "a", "b"}, {"a", "b", "clock"}}) {
      const auto permuted = measure(reorder_registers(s, order), "clock");
      for (std::size_t y = 0; y < base.size(); ++y) {
        CHECK(std::abs(permuted[y] - base[y]) < 1e-14);
      }
    }
  }
}

TEST_CASE("measure_outcome follows the Born rule") {
  SplitMix64 rng(51);
  const RegisterLayout layout{{"ancilla", 1}, {"system", 2}};
  const auto s = random_state(layout, rng);
  const auto table = measure(s, "ancilla");
  const auto record = measure_outcome(s, "ancilla", 1);
  CHECK(std::abs(record.probability - table[1]) < 1e-14);
  CHECK(std::abs(record.post_state.amplitudes().norm() - 1.0) < 1e-12);
  CHECK(measure(record.post_state, "ancilla")[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(measure_outcome(basis_state(layout, 0), "ancilla", 1), PostselectionError);
}

TEST_CASE("sample") {
  SUBCASE("deterministic table") {
    const auto counts = sample(ProbabilityTable{{1.0}}, 1000, 3);
    CHECK(counts[0] == 1000);
  }
  SUBCASE("fair coin within 5 sigma") {
    const auto counts = sample(ProbabilityTable{{0.5, 0.5}}, 100000, 77);
    const double sigma = std::sqrt(100000 * 0.25);
    CHECK(std::abs(static_cast<double>(counts[0]) - 50000.0) < 5 * sigma);
    CHECK(counts[0] + counts[1] == 100000);
  }
  SUBCASE("reproducible per seed") {
    const ProbabilityTable t{{0.2, 0.3, 0.5}};
    CHECK(sample(t, 5000, 9) == sample(t, 5000, 9));
    CHECK(sample(t, 5000, 9) != sample(t, 5000, 10));
  }
  SUBCASE("never samples impossible outcomes") {
    const auto counts = sample(ProbabilityTable{{0.0, 1.0, 0.0}}, 2000, 1);
    CHECK(counts[1] == 2000);
  }
  CHECK_THROWS_AS(sample(ProbabilityTable{{1.0}}, 0, 1), PreconditionError);
}
