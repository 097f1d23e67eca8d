#include "qcaveat/hhl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

constexpr double kMinSuccessProbability = 1e-12;
constexpr double kDefaultRotationMargin = 1e-9;

struct RoundingModel {
  SpectralDecomposition spectrum;
  std::vector<HhlMode> modes;
  Eigen::Index kept = 0;
  double discarded_weight = 0.0;
  double min_kept_decoded = std::numeric_limits<double>::infinity();
  double rotation_constant = 0.0;
};

void validate(const HermitianMatrix& a, const CVector& b, const HhlConfig& config) {
  if (b.size() != a.dim()) {
    throw PreconditionError("right-hand side dimension does not match the matrix");
  }
  if (!b.allFinite() || !(b.norm() > 0.0)) {
    throw PreconditionError("right-hand side must be a nonzero finite vector");
  }
  if (!(config.mu >= 0.0) || !std::isfinite(config.mu)) {
    throw PreconditionError("mu must be finite and >= 0");
  }
  if (config.rotation_constant && !(*config.rotation_constant > 0.0)) {
    throw PreconditionError("rotation constant C must be > 0");
  }
}

bool passes_filter(double decoded, double mu) {
  return decoded != 0.0 && std::abs(decoded) >= mu;
}

RoundingModel build_model(const HermitianMatrix& a, const CVector& b, const HhlConfig& config) {
  validate(a, b, config);
  const QpeConfig qpe = config.qpe();
  RoundingModel model{eig_hermitian(a), {}, 0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
  const double top = model.spectrum.eigenvalues.cwiseAbs().maxCoeff();
  if (!phase_in_range(top, config.t)) {
    std::ostringstream msg;
    msg << "|lambda_max t| = " << top * config.t << " must be < pi";
    throw PreconditionError(msg.str());
  }

  const CVector beta = model.spectrum.coordinates(b);
  const double b_norm2 = b.squaredNorm();
  for (Eigen::Index j = 0; j < model.spectrum.dim(); ++j) {
    HhlMode mode;
    mode.eigenvalue = model.spectrum.eigenvalues(j);
    mode.decoded = decode_eigenvalue(nearest_grid_point(mode.eigenvalue, qpe), qpe);
    mode.beta = beta(j);
    mode.kept = passes_filter(mode.decoded, config.mu);
    if (mode.kept) {
      ++model.kept;
      model.min_kept_decoded = std::min(model.min_kept_decoded, std::abs(mode.decoded));
    } else {
      model.discarded_weight += std::norm(mode.beta) / b_norm2;
    }
    model.modes.push_back(mode);
  }
  if (model.kept == 0) {
    std::ostringstream msg;
    msg << "every decoded eigenvalue lies below mu = " << config.mu << "; nothing to invert";
    throw EmptySolutionError(msg.str());
  }

  model.rotation_constant = config.rotation_constant.value_or(
      model.min_kept_decoded * (1.0 - kDefaultRotationMargin));
  if (model.rotation_constant > model.min_kept_decoded * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "rotation constant C = " << model.rotation_constant
        << " exceeds the smallest kept |lambda-hat| = " << model.min_kept_decoded;
    throw PreconditionError(msg.str());
  }
  return model;
}

std::optional<double> sampled_probability(double p, const HhlConfig& config) {
  if (config.shots == 0) return std::nullopt;
  const std::uint64_t hits = sample_binomial(std::clamp(p, 0.0, 1.0), config.shots, config.seed);
  return static_cast<double>(hits) / static_cast<double>(config.shots);
}

}  // namespace

HhlResult hhl_ideal(const HermitianMatrix& a, const CVector& b, const HhlConfig& config) {
  const RoundingModel model = build_model(a, b, config);

  CVector x = CVector::Zero(a.dim());
  for (Eigen::Index j = 0; j < a.dim(); ++j) {
    const HhlMode& mode = model.modes[static_cast<std::size_t>(j)];
    if (mode.kept) x += (mode.beta / mode.decoded) * model.spectrum.eigenvectors.col(j);
  }
  if (!(x.norm() > 0.0)) {
    throw EmptySolutionError("right-hand side has no weight on the kept eigencomponents");
  }

  const double success =
      model.rotation_constant * model.rotation_constant * x.squaredNorm() / b.squaredNorm();
  return HhlResult{embed_vector("system", x),
                   success,
                   sampled_probability(success, config),
                   x,
                   model.kept,
                   model.discarded_weight,
                   model.rotation_constant,
                   model.modes,
                   std::nullopt};
}

HhlResult hhl_circuit(const HermitianMatrix& a, const CVector& b, const HhlConfig& config) {
  const RoundingModel model = build_model(a, b, config);
  const Eigen::Index dim = a.dim();
  int system_qubits = 0;
  while ((Eigen::Index{1} << system_qubits) < dim) ++system_qubits;
  if ((Eigen::Index{1} << system_qubits) != dim || system_qubits == 0) {
    throw PreconditionError("hhl_circuit needs a matrix dimension that is a power of two >= 2");
  }

  const QpeConfig qpe = config.qpe();
  const RegisterLayout layout{
      {"ancilla", 1}, {"clock", config.clock_qubits}, {"system", system_qubits}};
  CVector initial = CVector::Zero(static_cast<Eigen::Index>(layout.dim()));
  initial.head(dim) = b / b.norm();  // ancilla and clock in |0>
  QuantumState state = prepare_state(layout, initial);

  const CMatrix forward = matrix_exponential_unitary(model.spectrum, config.t);
  state = hadamard_transform(state, "clock");
  state = apply_controlled_power(state, forward, "clock", "system");
  state = inverse_qft(state, "clock");

  const double c = model.rotation_constant;
  const double mu = config.mu;
  state = apply_conditional(state, "clock", "ancilla",
                            [&](std::uint64_t y) -> std::optional<CMatrix> {
                              const double decoded = decode_eigenvalue(y, qpe);
                              if (!passes_filter(decoded, mu)) return std::nullopt;
                              // Clock values between grid-rounded eigenvalues can
                              // fall below C; their amplitude saturates at 1.
                              const double amp = std::clamp(c / decoded, -1.0, 1.0);
                              const double keep = std::sqrt(1.0 - amp * amp);
                              CMatrix rot(2, 2);
                              rot << keep, -amp, amp, keep;
                              return rot;
                            });

  state = qft(state, "clock");
  state = apply_controlled_power(state, forward.adjoint(), "clock", "system");
  state = hadamard_transform(state, "clock");

  const double success = measure(state, "ancilla")[1];
  if (!(success >= kMinSuccessProbability)) {
    std::ostringstream msg;
    msg << "postselection on the ancilla succeeds with probability " << success;
    throw PostselectionError(msg.str());
  }

  const RegisterSlot ancilla = layout.slot("ancilla");
  CVector branch(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    branch(s) = state.amplitude((std::uint64_t{1} << ancilla.shift) | static_cast<std::uint64_t>(s));
  }
  const double branch_probability = branch.squaredNorm();
  if (!(branch_probability >= kMinSuccessProbability)) {
    std::ostringstream msg;
    msg << "clock never returns to |0> on the success branch (probability "
        << branch_probability << ")";
    throw PostselectionError(msg.str());
  }

  const auto sampled = sampled_probability(success, config);
  // Norm model: success = C^2 |x~|^2 / |b|^2.
  const double z_tilde = sampled.value_or(success) * b.squaredNorm() / (c * c);
  const CVector direction = branch / std::sqrt(branch_probability);

  return HhlResult{embed_vector("system", direction),
                   success,
                   sampled,
                   std::sqrt(z_tilde) * direction,
                   model.kept,
                   model.discarded_weight,
                   c,
                   model.modes,
                   branch_probability / success};
}

HermitianMatrix scaling_rescale(const HermitianMatrix& a_tilde, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw PreconditionError("rescaling factor t must be finite and > 0");
  }
  return a_tilde.scaled(t);
}

double fidelity_error(const CVector& a, const CVector& b) {
  if (a.size() != b.size() || !(a.norm() > 0.0) || !(b.norm() > 0.0)) {
    throw PreconditionError("fidelity needs two nonzero vectors of equal length");
  }
  const double overlap = std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
  return std::max(0.0, 1.0 - overlap);
}

}  // namespace qcaveat
