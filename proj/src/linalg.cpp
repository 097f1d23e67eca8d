#include "qcaveat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

void require_finite(const CMatrix& m) {
  if (!m.allFinite()) {
    throw PreconditionError("matrix contains non-finite entries");
  }
}

// Modified Gram-Schmidt over columns [first, last) of v, in index order.
void orthonormalize_block(CMatrix& v, Eigen::Index first, Eigen::Index last) {
  for (Eigen::Index j = first; j < last; ++j) {
    for (Eigen::Index k = first; k < j; ++k) {
      const Complex proj = v.col(k).dot(v.col(j));
      v.col(j) -= proj * v.col(k);
    }
    v.col(j).normalize();
  }
}

// First component of maximal magnitude becomes real positive.
void fix_phase(Eigen::Ref<CVector> col) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    // Magnitudes within rounding count as equal; the lower index wins.
    if (std::abs(col(i)) > best * (1.0 + 1e-12)) {
      best = std::abs(col(i));
      pivot = i;
    }
  }
  if (best > 0.0) {
    col *= std::conj(col(pivot)) / best;
  }
}

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& entries) {
  if (entries.rows() < 1 || entries.rows() != entries.cols()) {
    std::ostringstream msg;
    msg << "HermitianMatrix must be square with dim >= 1, got " << entries.rows() << "x"
        << entries.cols();
    throw PreconditionError(msg.str());
  }
  require_finite(entries);
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |a_ij - conj(a_ji)| = " << asym;
    throw PreconditionError(msg.str());
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& values) {
  return HermitianMatrix(values.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianMatrix HermitianMatrix::scaled(double factor) const {
  return HermitianMatrix(entries_ * factor);
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

CVector SpectralDecomposition::coordinates(const CVector& v) const {
  if (v.size() != dim()) {
    throw PreconditionError("vector dimension does not match the decomposition");
  }
  return eigenvectors.adjoint() * v;
}

double SpectralBounds::tightest() const {
  return std::min({trace_bound, one_norm, frobenius, max_entry_bound});
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& input) {
  const Eigen::Index n = input.dim();
  CMatrix a = input.entries();
  CMatrix v = CMatrix::Identity(n, n);

  const double frob = a.norm();
  const double target = 1e-15 * frob;
  const double floor_tol = 1e-12 * frob;
  double off = off_diagonal_norm(a);
  double previous = off;

  int sweep = 0;
  while (off > target) {
    if (sweep == kMaxJacobiSweeps) {
      if (off <= floor_tol) break;
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge after " << kMaxJacobiSweeps
          << " sweeps (dim " << n << ", off-diagonal residual " << off << ")";
      throw ConvergenceError(msg.str());
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (r == 0.0 || r < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = a(p, q) / r;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * r);
        const double tan_rot = (theta >= 0.0 ? 1.0 : -1.0) /
                               (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tan_rot * tan_rot + 1.0);
        const double s = tan_rot * c;
        const Complex g_qp = -s * std::conj(phase);
        const Complex g_qq = c * std::conj(phase);

        // A <- A G on columns p, q.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * c + akq * g_qp;
          a(k, q) = akp * s + akq * g_qq;
        }
        // A <- G^dagger A on rows p, q.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + std::conj(g_qp) * aqk;
          a(q, k) = s * apk + std::conj(g_qq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * c + vkq * g_qp;
          v(k, q) = vkp * s + vkq * g_qq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
    // Stalled at the rounding floor.
    if (off >= previous && off <= floor_tol) break;
    previous = off;
  }

  RVector raw = a.diagonal().real();
  const double scale = raw.cwiseAbs().maxCoeff();
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double ai = std::abs(raw(i));
    const double aj = std::abs(raw(j));
    if (std::abs(ai - aj) > tie) return ai > aj;
    if (std::abs(raw(i) - raw(j)) > tie) return raw(i) > raw(j);
    return i < j;
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = raw(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }

  const double degenerate = 1e-10 * std::max(scale, 1e-300);
  for (Eigen::Index first = 0; first < n;) {
    Eigen::Index last = first + 1;
    while (last < n && std::abs(out.eigenvalues(last) - out.eigenvalues(first)) <= degenerate) {
      ++last;
    }
    orthonormalize_block(out.eigenvectors, first, last);
    first = last;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    fix_phase(out.eigenvectors.col(k));
  }
  return out;
}

SpectralBounds spectral_bounds(const HermitianMatrix& a) {
  const CMatrix& m = a.entries();
  SpectralBounds b;
  b.trace_bound = std::sqrt(std::abs((m * m.adjoint()).trace().real()));
  b.one_norm = m.cwiseAbs().colwise().sum().maxCoeff();
  b.frobenius = std::sqrt(m.cwiseAbs2().sum());
  b.max_entry_bound = static_cast<double>(a.dim()) * m.cwiseAbs().maxCoeff();
  return b;
}

double condition_number(const SpectralDecomposition& d) {
  const RVector mags = d.eigenvalues.cwiseAbs();
  const double largest = mags.maxCoeff();
  const double smallest = mags.minCoeff();
  if (largest == 0.0 || smallest < kSingularCutoff * largest) {
    std::ostringstream msg;
    msg << "matrix is singular: min |lambda| = " << smallest << ", max |lambda| = " << largest;
    throw SingularMatrixError(msg.str());
  }
  return largest / smallest;
}

ThresholdedSolution thresholded_solve(const SpectralDecomposition& d, const CVector& b,
                                      double mu) {
  if (b.size() != d.dim()) {
    throw PreconditionError("right-hand side dimension does not match the matrix");
  }
  if (!(b.norm() > 0.0) || !b.allFinite()) {
    throw PreconditionError("right-hand side must be a nonzero finite vector");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw PreconditionError("threshold mu must be finite and >= 0");
  }
  const double cutoff = kSingularCutoff * d.eigenvalues.cwiseAbs().maxCoeff();
  const CVector beta = d.coordinates(b);

  ThresholdedSolution out;
  out.x = CVector::Zero(d.dim());
  for (Eigen::Index j = 0; j < d.dim(); ++j) {
    const double lambda = d.eigenvalues(j);
    if (std::abs(lambda) >= mu && std::abs(lambda) > cutoff) {
      out.x += (beta(j) / lambda) * d.eigenvectors.col(j);
      ++out.kept;
    }
  }
  if (out.kept == 0) {
    std::ostringstream msg;
    msg << "every eigenvalue lies below the threshold mu = " << mu << "; solution is zero";
    out.warning = msg.str();
  }
  return out;
}

ThresholdedSolution thresholded_solve(const HermitianMatrix& a, const CVector& b, double mu) {
  return thresholded_solve(eig_hermitian(a), b, mu);
}

CMatrix matrix_exponential_unitary(const SpectralDecomposition& d, double t) {
  if (!std::isfinite(t)) {
    throw PreconditionError("time scale must be finite");
  }
  CVector phases(d.dim());
  for (Eigen::Index j = 0; j < d.dim(); ++j) {
    phases(j) = std::polar(1.0, d.eigenvalues(j) * t);
  }
  return d.eigenvectors * phases.asDiagonal() * d.eigenvectors.adjoint();
}

double unitarity_deviation(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qcaveat
