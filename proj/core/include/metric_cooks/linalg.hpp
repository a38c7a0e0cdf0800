#pragma once

#include <Eigen/Dense>

namespace mcooks::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Square matrix that is exactly symmetric with finite entries.
class SymMatrix {
 public:
  /// Throws InvalidInput unless `m` is square, finite and bitwise symmetric.
  explicit SymMatrix(Matrix m);

  /// Averages `m` with its transpose first; use for computed products whose
  /// symmetry only holds up to rounding.
  static SymMatrix symmetrized(const Matrix& m);

  static SymMatrix identity(Index order);

  Index order() const noexcept { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : entries_(std::move(m)) {}

  Matrix entries_;
};

/// Eigenvalues in descending order with column-aligned orthonormal vectors.
/// Each vector's largest-magnitude entry (lowest index on ties) is positive.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

EigenDecomposition sym_eig(const SymMatrix& a);

/// Coefficients minimising ||design * c - response||. Requires more rows than
/// columns (InsufficientData) and full column rank (SingularDesign, judged by
/// the singular-value ratio against 1e-12).
Vector least_squares(const Matrix& design, const Vector& response);

/// Like least_squares, but square designs are accepted and solved exactly.
Vector solve_design(const Matrix& design, const Vector& response);

/// exp(-t * A) assembled from the eigendecomposition of A. Requires t >= 0.
SymMatrix matrix_exp_sym(const SymMatrix& a, double t);

double frobenius_dist(const Matrix& a, const Matrix& b);

/// Flips the sign of `v` so its largest-magnitude entry is positive.
void canonicalize_sign(Eigen::Ref<Vector> v);

}  // namespace mcooks::linalg
