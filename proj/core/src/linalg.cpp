#include "metric_cooks/linalg.hpp"

#include <cmath>
#include <string>

#include "metric_cooks/error.hpp"

namespace mcooks::linalg {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
  }
}

Vector solve_full_rank(const Matrix& design, const Vector& response) {
  if (design.rows() != response.size()) {
    throw Error(ErrorKind::InvalidInput, "design rows " + std::to_string(design.rows()) +
                                             " != response length " +
                                             std::to_string(response.size()));
  }
  if (design.cols() == 0) {
    throw Error(ErrorKind::InvalidInput, "design has no columns");
  }
  require_finite(design, "design");
  require_finite(response, "response");

  const Vector sv = Eigen::JacobiSVD<Matrix>(design).singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  if (!(largest > 0.0) || smallest / largest < 1e-12) {
    throw Error(ErrorKind::SingularDesign, "design is rank deficient (singular value ratio " +
                                               std::to_string(largest > 0.0 ? smallest / largest
                                                                            : 0.0) +
                                               ")");
  }
  return Eigen::HouseholderQR<Matrix>(design).solve(response);
}

}  // namespace

SymMatrix::SymMatrix(Matrix m) : entries_(std::move(m)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorKind::InvalidInput, "symmetric matrix must be square and non-empty");
  }
  require_finite(entries_, "symmetric matrix");
  for (Index j = 0; j < entries_.cols(); ++j) {
    for (Index i = j + 1; i < entries_.rows(); ++i) {
      if (entries_(i, j) != entries_(j, i)) {
        throw Error(ErrorKind::InvalidInput, "matrix is not symmetric at (" +
                                                 std::to_string(i) + ", " + std::to_string(j) +
                                                 ")");
      }
    }
  }
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidInput, "symmetric matrix must be square and non-empty");
  }
  require_finite(m, "symmetric matrix");
  Matrix s(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    s(j, j) = m(j, j);
    for (Index i = j + 1; i < m.rows(); ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymMatrix(std::move(s), Trusted{});
}

SymMatrix SymMatrix::identity(Index order) {
  return SymMatrix(Matrix::Identity(order, order), Trusted{});
}

void canonicalize_sign(Eigen::Ref<Vector> v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best_abs) {
      best_abs = std::abs(v(i));
      best = i;
    }
  }
  if (v.size() > 0 && v(best) < 0.0) v = -v;
}

EigenDecomposition sym_eig(const SymMatrix& a) {
  const Matrix& m = a.matrix();
  require_finite(m, "symmetric matrix");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "symmetric eigensolver did not converge");
  }

  const Index n = m.rows();
  EigenDecomposition out{Vector(n), Matrix(n, n)};
  // Eigen sorts ascending.
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    canonicalize_sign(out.eigenvectors.col(k));
  }
  return out;
}

Vector least_squares(const Matrix& design, const Vector& response) {
  if (design.rows() <= design.cols()) {
    throw Error(ErrorKind::InsufficientData,
                "least squares needs more rows than columns (" + std::to_string(design.rows()) +
                    " <= " + std::to_string(design.cols()) + ")");
  }
  return solve_full_rank(design, response);
}

Vector solve_design(const Matrix& design, const Vector& response) {
  if (design.rows() < design.cols()) {
    throw Error(ErrorKind::InsufficientData,
                "design has fewer rows than columns (" + std::to_string(design.rows()) + " < " +
                    std::to_string(design.cols()) + ")");
  }
  return solve_full_rank(design, response);
}

SymMatrix matrix_exp_sym(const SymMatrix& a, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidInput, "matrix exponential scale must be finite and >= 0");
  }
  const EigenDecomposition eig = sym_eig(a);
  const Vector weights = (-t * eig.eigenvalues.array()).exp().matrix();
  const Matrix result = eig.eigenvectors * weights.asDiagonal() * eig.eigenvectors.transpose();
  return SymMatrix::symmetrized(result);
}

double frobenius_dist(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::InvalidInput, "frobenius_dist: dimension mismatch");
  }
  return (a - b).norm();
}

}  // namespace mcooks::linalg
