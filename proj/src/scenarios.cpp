#include "qcaveat/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "qcaveat/error.hpp"
#include "qcaveat/error_lab.hpp"
#include "qcaveat/hhl.hpp"
#include "qcaveat/qml.hpp"
#include "qcaveat/rng.hpp"

namespace qcaveat {

namespace {

using Row = std::vector<Cell>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- helpers

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(trim(std::string_view(text).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_scalar(const std::string& name, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(name, "parameter '" + name + "': cannot parse '" + text + "'");
  }
  if constexpr (std::is_same_v<T, double>) {
    if (!std::isfinite(value)) throw ParseError(name, "parameter '" + name + "' must be finite");
  }
  return value;
}

// Runs f(i) for i in [0, n) on up to `threads` workers and returns the
// results in index order. The first failing index's exception is rethrown.
template <class F>
std::vector<Row> parallel_rows(std::size_t n, unsigned threads, F f) {
  std::vector<Row> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

CMatrix haar_unitary(Eigen::Index n, SplitMix64& rng) {
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  const Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

HermitianMatrix with_spectrum(const RVector& spectrum, SplitMix64& rng) {
  const CMatrix u = haar_unitary(spectrum.size(), rng);
  return HermitianMatrix(u * spectrum.cast<Complex>().asDiagonal() * u.adjoint());
}

CVector gaussian_vector(Eigen::Index n, SplitMix64& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double require_positive(const ParameterSet& p, const std::string& name) {
  const double v = p.real(name);
  if (!(v > 0.0)) throw PreconditionError("parameter '" + name + "' must be > 0");
  return v;
}

std::int64_t require_at_least(const ParameterSet& p, const std::string& name, std::int64_t lo) {
  const std::int64_t v = p.integer(name);
  if (v < lo) throw PreconditionError("parameter '" + name + "' must be >= " + std::to_string(lo));
  return v;
}

template <class T>
std::vector<T> require_list(std::vector<T> v, const std::string& name, T lo) {
  for (T x : v) {
    if (!(x > lo)) {
      throw PreconditionError("every entry of '" + name + "' must exceed " + format_number(static_cast<double>(lo)));
    }
  }
  return v;
}

// Spectrum with |lambda| spread geometrically over [1/kappa, 1], alternating signs.
RVector graded_spectrum(Eigen::Index dim, double kappa) {
  RVector s(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double frac = dim == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(dim - 1);
    s(j) = std::pow(kappa, -frac) * (j % 2 == 0 ? 1.0 : -1.0);
  }
  return s;
}

// ---------------------------------------------------------------- scenarios

ResultTable norm_amplification(const ParameterSet& p, std::uint64_t seed, unsigned threads) {
  const auto norms = require_list(p.reals("x_norms"), "x_norms", 0.0);
  const auto dim = require_at_least(p, "dim", 1);
  const double kappa = require_positive(p, "kappa");
  HhlConfig config;
  config.clock_qubits = static_cast<int>(require_at_least(p, "clock_qubits", 1));

  SplitMix64 rng = SplitMix64::substream(seed, 0);
  const HermitianMatrix a = with_spectrum(graded_spectrum(dim, std::max(kappa, 1.0)), rng);
  const CVector b0 = gaussian_vector(dim, rng);
  const double x0 = thresholded_solve(a, b0, 0.0).x.norm();
  config.t = choose_time_scale(
      a, {BoundChoice::exact_lambda_max, alias_free_safety_factor(config.clock_qubits)});

  ResultTable table({"x_norm", "b_norm", "state_error", "classical_error", "residual", "Z_hhl",
                     "Z_tilde", "classical_over_norm_state"});
  for (auto& row : parallel_rows(norms.size(), threads, [&](std::size_t i) {
         // Scaling b scales x and x~ together, so the state error is pinned.
         const CVector b = b0 * (norms[i] / x0);
         const ErrorReport r = error_report(a, b, hhl_ideal(a, b, config));
         return Row{norms[i], b.norm(), r.state_error, r.classical_error, r.residual, r.z,
                    r.z_tilde, r.classical_error / (std::sqrt(r.z) * r.state_error)};
       })) {
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable mu_sweep(const ParameterSet& p, std::uint64_t seed, unsigned threads) {
  const auto mus = p.reals("mus");
  for (double mu : mus) {
    if (!(mu >= 0.0)) throw PreconditionError("every entry of 'mus' must be >= 0");
  }
  const auto dim = require_at_least(p, "dim", 1);
  const double kappa = require_positive(p, "kappa");
  const double epsilon = require_positive(p, "epsilon");
  HhlConfig base;
  base.clock_qubits = static_cast<int>(require_at_least(p, "clock_qubits", 1));

  SplitMix64 rng = SplitMix64::substream(seed, 0);
  const HermitianMatrix a = with_spectrum(graded_spectrum(dim, std::max(kappa, 1.0)), rng);
  const CVector b = gaussian_vector(dim, rng);
  const CVector x = thresholded_solve(a, b, 0.0).x;
  base.t = choose_time_scale(
      a, {BoundChoice::exact_lambda_max, alias_free_safety_factor(base.clock_qubits)});

  ResultTable table({"mu", "kept", "discarded_weight", "state_error", "classical_error",
                     "residual", "residual_identity_gap", "cost_thresholded"});
  for (auto& row : parallel_rows(mus.size(), threads, [&](std::size_t i) {
         HhlConfig c = base;
         c.mu = mus[i];
         CostModel cost;
         cost.m = static_cast<double>(std::max<std::int64_t>(dim, 2));
         cost.s = static_cast<double>(dim);
         cost.t = c.t;
         cost.epsilon = epsilon;
         try {
           const HhlResult h = hhl_ideal(a, b, c);
           const ErrorReport r = error_report(a, b, h);
           double cutoff = c.mu;
           if (!(cutoff > 0.0)) {
             cutoff = std::numeric_limits<double>::infinity();
             for (const HhlMode& m : h.modes) {
               if (m.kept) cutoff = std::min(cutoff, std::abs(m.decoded));
             }
           }
           cost.mu = cutoff;
           return Row{mus[i], static_cast<std::int64_t>(h.kept_eigenvalue_count), h.discarded_weight,
                      r.state_error, r.classical_error, r.residual,
                      std::abs(r.residual * r.residual - r.residual_from_modes_squared()),
                      hhl_cost(cost, CostVariant::thresholded)};
         } catch (const EmptySolutionError&) {
           cost.mu = mus[i];
           return Row{mus[i], std::int64_t{0}, 1.0, kNaN, x.norm(), b.norm(), 0.0,
                      hhl_cost(cost, CostVariant::thresholded)};
         }
       })) {
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable grid_refinement(const ParameterSet& p, std::uint64_t seed, unsigned threads) {
  const auto ks = require_list(p.integers("clock_qubits"), "clock_qubits", std::int64_t{0});
  const auto instances = require_at_least(p, "instances", 1);
  const auto dim = require_at_least(p, "dim", 1);
  const bool circuit = p.integer("circuit") != 0;

  struct Instance {
    HermitianMatrix a;
    CVector b;
    double t;
  };
  // One time scale per instance, alias-free for the coarsest clock.
  const double rho = alias_free_safety_factor(static_cast<int>(*std::min_element(ks.begin(), ks.end())));
  std::vector<Instance> pool;
  for (std::int64_t i = 0; i < instances; ++i) {
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(i));
    RVector spectrum(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      spectrum(j) = (0.2 + 0.8 * rng.uniform()) * (rng.below(2) == 0 ? 1.0 : -1.0);
    }
    HermitianMatrix a = with_spectrum(spectrum, rng);
    const double t = choose_time_scale(a, {BoundChoice::exact_lambda_max, rho});
    pool.push_back({std::move(a), gaussian_vector(dim, rng), t});
  }

  ResultTable table({"clock_qubits", "N", "mean_resolution", "mean_state_error",
                     "mean_classical_error", "max_decode_error_over_resolution",
                     "mean_circuit_fidelity_error"});
  for (auto& row : parallel_rows(ks.size(), threads, [&](std::size_t i) {
         const int k = static_cast<int>(ks[i]);
         double state = 0.0, classical = 0.0, decode = 0.0, fidelity = 0.0, resolution = 0.0;
         for (const Instance& inst : pool) {
           HhlConfig c;
           c.t = inst.t;
           c.clock_qubits = k;
           resolution += c.qpe().resolution();
           const HhlResult h = hhl_ideal(inst.a, inst.b, c);
           const ErrorReport r = error_report(inst.a, inst.b, h);
           state += r.state_error;
           classical += r.classical_error;
           for (const HhlMode& m : h.modes) {
             decode = std::max(decode, std::abs(m.eigenvalue - m.decoded) / c.qpe().resolution());
           }
           if (circuit) {
             const CVector exact = thresholded_solve(inst.a, inst.b, 0.0).x;
             fidelity += fidelity_error(hhl_circuit(inst.a, inst.b, c).decoded_solution, exact);
           }
         }
         const double n = static_cast<double>(pool.size());
         return Row{ks[i], std::int64_t{1} << k, resolution / n, state / n,
                    classical / n, decode, circuit ? fidelity / n : kNaN};
       })) {
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable t_sweep(const ParameterSet& p, std::uint64_t, unsigned) {
  const double t_star = require_positive(p, "t_star");
  const auto divisors = require_list(p.reals("divisors"), "divisors", 0.0);
  CostModel m;
  m.m = p.real("M");
  m.s = p.real("s");
  m.lambda_min = p.real("lambda_min");
  m.epsilon = p.real("epsilon");

  ResultTable table({"t", "cost_rescaled", "ratio_to_first"});
  double first = 0.0;
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    m.t = t_star / divisors[i];
    const double cost = hhl_cost(m, CostVariant::rescaled);
    if (i == 0) first = cost;
    table.add_row({*m.t, cost, cost / first});
  }
  return table;
}

ResultTable trace_scaling(const ParameterSet& p, std::uint64_t seed, unsigned threads) {
  const auto dims = require_list(p.integers("dims"), "dims", std::int64_t{0});
  const auto shots = static_cast<std::uint64_t>(require_at_least(p, "shots", 1));
  const auto seeds = require_at_least(p, "seeds", 1);
  const auto features = require_at_least(p, "feature_dim", 1);

  ResultTable table({"M", "trace_exact", "median_normalized_error", "median_total_error",
                     "total_halfwidth"});
  for (auto& row : parallel_rows(dims.size(), threads, [&](std::size_t i) {
         const std::int64_t m = dims[i];
         // Points with iid squared norms in [0.5, 1.5]: the kernel diagonal is iid.
         SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(i));
         std::vector<CVector> points;
         for (std::int64_t j = 0; j < m; ++j) {
           CVector v = gaussian_vector(features, rng);
           points.push_back(v * (std::sqrt(0.5 + rng.uniform()) / v.norm()));
         }
         const HermitianMatrix k = gram_matrix(Dataset(points));
         std::vector<double> normalized, total;
         double halfwidth = 0.0;
         for (std::int64_t s = 0; s < seeds; ++s) {
           const std::uint64_t shot_seed =
               SplitMix64::substream(seed, 1000003ULL * (i + 1) + static_cast<std::uint64_t>(s))();
           const TraceEstimate e = trace_estimate(k, shots, shot_seed);
           normalized.push_back(std::abs(e.normalized.value - *e.normalized.exact));
           total.push_back(std::abs(e.total.value - *e.total.exact));
           halfwidth = e.total.confidence_halfwidth;
         }
         return Row{m, k.entries().trace().real(), median(normalized), median(total), halfwidth};
       })) {
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable classification_z_scaling(const ParameterSet& p, std::uint64_t seed, unsigned threads) {
  const auto zs = require_list(p.reals("z_values"), "z_values", 0.0);
  const double prob = require_positive(p, "p");
  const auto shots = static_cast<std::uint64_t>(require_at_least(p, "shots", 1));
  const auto seeds = require_at_least(p, "seeds", 1);
  const auto cluster = require_at_least(p, "cluster_size", 2);
  const auto dim = require_at_least(p, "dim", 2);

  // Family with fixed P: u = a w, v_j = c w + rho q_j, with sum q_j = 0,
  // q_j orthogonal to w, mean |q_j|^2 = 1. Then Z = a^2 + c^2 + rho^2 and
  // |u - mean(V)|^2 = (a - c)^2. Taking rho^2 = Z/4, R^2 = a^2 + c^2 = 3Z/4,
  // a = R cos(phi), c = R sin(phi) gives P = R^2 (1 - sin 2 phi) / (2 Z^2).
  SplitMix64 rng = SplitMix64::substream(seed, 0);
  CVector w = gaussian_vector(dim, rng);
  w /= w.norm();
  std::vector<CVector> q(static_cast<std::size_t>(cluster));
  CVector centre = CVector::Zero(dim);
  for (auto& v : q) {
    v = gaussian_vector(dim, rng);
    v -= w * w.dot(v);
    centre += v / static_cast<double>(cluster);
  }
  double spread = 0.0;
  for (auto& v : q) {
    v -= centre;
    spread += v.squaredNorm() / static_cast<double>(cluster);
  }
  for (auto& v : q) v /= std::sqrt(spread);

  ResultTable table({"Z_cls", "P", "t", "distance_exact", "median_distance_error",
                     "median_P_error", "identity_gap", "amplification"});
  for (auto& row : parallel_rows(zs.size(), threads, [&](std::size_t i) {
         const double z = zs[i];
         const double r2 = 0.75 * z;
         const double sin2phi = 1.0 - 2.0 * prob * z * z / r2;
         if (sin2phi < -1.0 || sin2phi > 1.0) {
           throw PreconditionError("P = " + format_number(prob) + " is unreachable at Z = " +
                                   format_number(z) + "; lower p or Z");
         }
         const double phi = 0.5 * std::asin(sin2phi);
         const double a = std::sqrt(r2) * std::cos(phi);
         const double c = std::sqrt(r2) * std::sin(phi);
         const double rho = std::sqrt(0.25 * z);
         const CVector u = a * w;
         std::vector<CVector> vs;
         double largest = u.norm();
         for (const CVector& qj : q) {
           vs.push_back(c * w + rho * qj);
           largest = std::max(largest, vs.back().norm());
         }
         const Dataset v(vs);
         const double t = kMaxClassificationAngle / largest;
         std::vector<double> dist_err, p_err;
         ClassificationEstimate last;
         for (std::int64_t s = 0; s < seeds; ++s) {
           const std::uint64_t shot_seed =
               SplitMix64::substream(seed, 1000003ULL * (i + 1) + static_cast<std::uint64_t>(s))();
           last = classification_distance(u, v, t, shots, shot_seed);
           dist_err.push_back(last.distance_error);
           p_err.push_back(std::abs(last.p.value - *last.p.exact));
         }
         return Row{last.z, *last.p.exact, t, last.distance_exact, median(dist_err), median(p_err),
                    std::abs(2.0 * *last.p.exact * last.z * last.z - last.distance_exact),
                    last.amplification};
       })) {
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable counting_relative_error(const ParameterSet& p, std::uint64_t, unsigned) {
  const double n = require_positive(p, "N");
  const auto ks = require_list(p.reals("k_values"), "k_values", 0.0);
  const double epsilon = require_positive(p, "epsilon");
  ResultTable table({"K", "cost_fixed_epsilon", "epsilon_unit_error", "cost_unit_error",
                     "sqrt_NK", "crossover_ratio"});
  for (double k : ks) {
    const double unit = counting_cost(n, k, 1.0 / k);
    const double root = std::sqrt(n * k);
    table.add_row({k, counting_cost(n, k, epsilon), 1.0 / k, unit, root, unit / root});
  }
  return table;
}

ResultTable lowrank_t_over_m(const ParameterSet& p, std::uint64_t, unsigned) {
  const auto dims = require_list(p.integers("dims"), "dims", std::int64_t{1});
  CostModel m;
  m.s = p.real("s");
  m.lambda_min = p.real("lambda_min");
  m.epsilon = p.real("epsilon");
  ResultTable table({"M", "t", "cost_rescaled", "cost_over_log_M", "growth_over_M_squared"});
  double first = 0.0;
  double first_m = 0.0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const double dim = static_cast<double>(dims[i]);
    m.m = dim;
    m.t = 1.0 / dim;
    const double cost = hhl_cost(m, CostVariant::rescaled);
    const double per_log = cost / std::log(dim);
    if (i == 0) {
      first = per_log;
      first_m = dim;
    }
    table.add_row({dims[i], *m.t, cost, per_log, (per_log / first) / ((dim / first_m) * (dim / first_m))});
  }
  return table;
}

// ---------------------------------------------------------------- registry

using Runner = std::function<ResultTable(const ParameterSet&, std::uint64_t, unsigned)>;

struct Entry {
  ScenarioInfo info;
  Runner run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e{
        {{"classification_Z_scaling",
          "distance error of 2 P Z^2 versus Z at fixed P and shots",
          {{"z_values", ParamType::real_list, "1,2,4,8", "Z_cls values of the family"},
           {"p", ParamType::real, "0.02", "fixed P = |u - mean|^2 / (2 Z^2)"},
           {"shots", ParamType::integer, "10000", "shots per probability estimate"},
           {"seeds", ParamType::integer, "50", "repetitions per Z; medians are reported"},
           {"cluster_size", ParamType::integer, "4", "vectors in the cluster"},
           {"dim", ParamType::integer, "4", "vector dimension"}}},
         classification_z_scaling},
        {{"counting_relative_error",
          "quantum counting cost sqrt(N/K)/epsilon and its sqrt(NK) value at epsilon = 1/K",
          {{"N", ParamType::real, "1000000", "search space size"},
           {"k_values", ParamType::real_list, "1,10,100,1000", "marked item counts"},
           {"epsilon", ParamType::real, "0.01", "fixed relative error for comparison"}}},
         counting_relative_error},
        {{"grid_refinement",
          "HHL error versus clock size on random off-grid instances",
          {{"clock_qubits", ParamType::integer_list, "3,4,5,6,7,8", "clock sizes k"},
           {"instances", ParamType::integer, "20", "random instances averaged per k"},
           {"dim", ParamType::integer, "4", "matrix dimension"},
           {"circuit", ParamType::integer, "0", "1 also simulates the full circuit"}}},
         grid_refinement},
        {{"lowrank_t_over_M",
          "rescaled cost with the low-rank choice t = 1/M",
          {{"dims", ParamType::integer_list, "4,16,64", "matrix dimensions M"},
           {"s", ParamType::real, "1", "sparseness"},
           {"lambda_min", ParamType::real, "1", "smallest |eigenvalue| of the unscaled matrix"},
           {"epsilon", ParamType::real, "0.01", "accuracy"}}},
         lowrank_t_over_m},
        {{"mu_sweep",
          "threshold mu versus kept modes, truncation error and cost",
          {{"mus", ParamType::real_list, "0,0.05,0.1,0.2,0.4", "thresholds"},
           {"dim", ParamType::integer, "6", "matrix dimension"},
           {"kappa", ParamType::real, "50", "condition number of the graded spectrum"},
           {"clock_qubits", ParamType::integer, "8", "clock size k"},
           {"epsilon", ParamType::real, "0.01", "accuracy used in the cost column"}}},
         mu_sweep},
        {{"norm_amplification",
          "classical error |x - x~| versus |x| at a pinned state error",
          {{"x_norms", ParamType::real_list, "1,10,100,1000", "target solution norms"},
           {"dim", ParamType::integer, "4", "matrix dimension"},
           {"kappa", ParamType::real, "10", "condition number of the graded spectrum"},
           {"clock_qubits", ParamType::integer, "5", "clock size k"}}},
         norm_amplification},
        {{"t_sweep",
          "rescaled cost versus the time scale t",
          {{"t_star", ParamType::real, "1", "reference time scale"},
           {"divisors", ParamType::real_list, "1,2,4", "t = t_star / divisor"},
           {"M", ParamType::real, "64", "matrix dimension"},
           {"s", ParamType::real, "4", "sparseness"},
           {"lambda_min", ParamType::real, "0.1", "smallest |eigenvalue| of the unscaled matrix"},
           {"epsilon", ParamType::real, "0.01", "accuracy"}}},
         t_sweep},
        {{"trace_scaling",
          "Tr(K)/M versus Tr(K) estimation error at fixed shots",
          {{"dims", ParamType::integer_list, "16,64,256,1024", "kernel sizes M"},
           {"shots", ParamType::integer, "10000", "diagonal samples per estimate"},
           {"seeds", ParamType::integer, "50", "repetitions per M; medians are reported"},
           {"feature_dim", ParamType::integer, "8", "dimension of the data points"}}},
         trace_scaling},
    };
    std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.info.name < b.info.name; });
    return e;
  }();
  return entries;
}

}  // namespace

std::string_view to_string(ParamType t) {
  switch (t) {
    case ParamType::real:
      return "real";
    case ParamType::integer:
      return "integer";
    case ParamType::real_list:
      return "real list";
    case ParamType::integer_list:
      return "integer list";
  }
  return "unknown";
}

ParamValue parse_param(const ParamSpec& spec, const std::string& raw) {
  const std::string text = trim(raw);
  switch (spec.type) {
    case ParamType::real:
      return parse_scalar<double>(spec.name, text);
    case ParamType::integer:
      return parse_scalar<std::int64_t>(spec.name, text);
    case ParamType::real_list: {
      std::vector<double> out;
      for (const auto& item : split_list(text)) out.push_back(parse_scalar<double>(spec.name, item));
      return out;
    }
    case ParamType::integer_list: {
      std::vector<std::int64_t> out;
      for (const auto& item : split_list(text)) {
        out.push_back(parse_scalar<std::int64_t>(spec.name, item));
      }
      return out;
    }
  }
  throw ParseError(spec.name, "unknown parameter type");
}

const ParamValue& ParameterSet::at(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw PreconditionError("missing parameter '" + name + "'");
  return it->second;
}

double ParameterSet::real(const std::string& name) const {
  const ParamValue& v = at(name);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw PreconditionError("parameter '" + name + "' is not a real");
}

std::int64_t ParameterSet::integer(const std::string& name) const {
  if (const auto* i = std::get_if<std::int64_t>(&at(name))) return *i;
  throw PreconditionError("parameter '" + name + "' is not an integer");
}

std::vector<double> ParameterSet::reals(const std::string& name) const {
  if (const auto* v = std::get_if<std::vector<double>>(&at(name))) return *v;
  throw PreconditionError("parameter '" + name + "' is not a real list");
}

std::vector<std::int64_t> ParameterSet::integers(const std::string& name) const {
  if (const auto* v = std::get_if<std::vector<std::int64_t>>(&at(name))) return *v;
  throw PreconditionError("parameter '" + name + "' is not an integer list");
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = [] {
    std::vector<ScenarioInfo> out;
    for (const Entry& e : registry()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

const ScenarioInfo& find_scenario(const std::string& name) {
  for (const ScenarioInfo& s : scenario_catalog()) {
    if (s.name == name) return s;
  }
  throw ParseError("scenario", "unknown scenario '" + name + "'");
}

ParameterSet resolve_parameters(const ScenarioInfo& info,
                                const std::map<std::string, std::string>& overrides) {
  std::map<std::string, ParamValue> values;
  for (const ParamSpec& spec : info.params) {
    const auto it = overrides.find(spec.name);
    values.emplace(spec.name, parse_param(spec, it == overrides.end() ? spec.default_value : it->second));
  }
  for (const auto& [key, value] : overrides) {
    if (!values.count(key)) {
      throw ParseError(key, "unknown parameter '" + key + "' for scenario '" + info.name + "'");
    }
  }
  return ParameterSet(std::move(values));
}

unsigned worker_threads() {
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("QCAVEAT_THREADS");
  if (!env) return hardware;
  const std::string text = trim(env);
  const auto n = parse_scalar<std::int64_t>("QCAVEAT_THREADS", text);
  if (n < 1) throw ParseError("QCAVEAT_THREADS", "QCAVEAT_THREADS must be >= 1");
  return static_cast<unsigned>(std::min<std::int64_t>(n, 1024));
}

ResultTable run_scenario(const std::string& name, const ParameterSet& params, std::uint64_t seed,
                         unsigned threads) {
  for (const Entry& e : registry()) {
    if (e.info.name == name) return e.run(params, seed, std::max(1u, threads));
  }
  throw ParseError("scenario", "unknown scenario '" + name + "'");
}

}  // namespace qcaveat
