#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace qcaveat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Tolerance on |a_ij - conj(a_ji)| accepted when constructing a HermitianMatrix.
inline constexpr double kHermitianTolerance = 1e-12;

/// Eigenvalues with |lambda| below this fraction of |lambda_max| count as zero.
inline constexpr double kSingularCutoff = 1e-14;

/// Cap on cyclic Jacobi sweeps before eig_hermitian gives up.
inline constexpr int kMaxJacobiSweeps = 100;

/// Dense complex square matrix with enforced Hermitian symmetry.
///
/// Construction checks symmetry to kHermitianTolerance and then stores the
/// exactly symmetrized matrix (A + A^dagger) / 2, so downstream code may rely
/// on exact symmetry.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& entries);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix diagonal(const RVector& values);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const CMatrix& entries() const noexcept { return entries_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  HermitianMatrix scaled(double factor) const;

 private:
  CMatrix entries_;
};

/// Real eigenvalues sorted by descending magnitude with the matching unitary
/// eigenvector matrix (column j is |u_j>).
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  Eigen::Index dim() const noexcept { return eigenvalues.size(); }
  /// U diag(lambda) U^dagger.
  CMatrix reconstruct() const;
  /// Coordinates <u_j|v> of v in the eigenbasis.
  CVector coordinates(const CVector& v) const;
};

/// The four cheap upper bounds on |lambda_max|.
struct SpectralBounds {
  double trace_bound = 0.0;      ///< sqrt(Tr(A A^dagger))
  double one_norm = 0.0;         ///< max column absolute sum
  double frobenius = 0.0;        ///< sqrt(sum |a_ij|^2)
  double max_entry_bound = 0.0;  ///< M * max |a_ij|

  double tightest() const;
};

/// Result of a filtered spectral inversion.
struct ThresholdedSolution {
  CVector x;
  Eigen::Index kept = 0;
  /// Set when no eigenvalue survived the threshold and x is the zero vector.
  std::optional<std::string> warning;
};

/// Cyclic complex Jacobi eigensolver. Eigenvalues come back sorted by
/// descending |lambda|, ties by signed value descending, then by original
/// diagonal index. Each eigenvector is phase-fixed so that its first
/// largest-magnitude component is real and positive.
///
/// Throws ConvergenceError after kMaxJacobiSweeps sweeps without convergence.
SpectralDecomposition eig_hermitian(const HermitianMatrix& a);

SpectralBounds spectral_bounds(const HermitianMatrix& a);

/// max |lambda| / min |lambda|. Throws SingularMatrixError when some
/// |lambda_j| falls below kSingularCutoff * |lambda_max|.
double condition_number(const SpectralDecomposition& d);

/// sum over |lambda_j| >= mu of <u_j|b> / lambda_j |u_j>.
///
/// Exactly-zero eigenvalues (below kSingularCutoff relative) are never
/// inverted, even for mu = 0.
ThresholdedSolution thresholded_solve(const HermitianMatrix& a, const CVector& b, double mu);
ThresholdedSolution thresholded_solve(const SpectralDecomposition& d, const CVector& b, double mu);

/// U diag(exp(i lambda t)) U^dagger.
CMatrix matrix_exponential_unitary(const SpectralDecomposition& d, double t);

/// max |(U^dagger U - I)_ij|.
double unitarity_deviation(const CMatrix& u);

/// Largest entry magnitude of a - b.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace qcaveat
