#include "metric_cooks/mds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metric_cooks/error.hpp"

namespace mcooks {

using linalg::Index;

linalg::SymMatrix double_center(const DistanceMatrix& d) {
  const Index n = static_cast<Index>(d.order());
  const Matrix sq = d.matrix().array().square().matrix();
  const Vector row_mean = sq.rowwise().mean();
  const double grand_mean = row_mean.mean();

  // Fill the upper triangle and mirror it so the result is bitwise symmetric.
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double v = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand_mean);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return linalg::SymMatrix(std::move(m));
}

SurrogateScores leading_score(const linalg::SymMatrix& m) {
  const Index n = m.order();
  const double scale = std::max(1.0, std::abs(m.matrix().trace()));
  const linalg::EigenDecomposition eig = linalg::sym_eig(m);
  const double lambda = eig.eigenvalues(0);
  if (!(lambda > 1e-12 * scale)) return {Vector::Zero(n), 0.0};
  return {eig.eigenvectors.col(0) * std::sqrt(lambda), lambda};
}

SurrogateScores surrogate_from_distances(const DistanceMatrix& d) {
  return leading_score(double_center(d));
}

Matrix full_scores(const linalg::SymMatrix& m) {
  const double scale = std::max(1.0, std::abs(m.matrix().trace()));
  const linalg::EigenDecomposition eig = linalg::sym_eig(m);
  Index kept = 0;
  while (kept < eig.eigenvalues.size() && eig.eigenvalues(kept) > 1e-12 * scale) ++kept;
  Matrix out(m.order(), kept);
  for (Index k = 0; k < kept; ++k) {
    out.col(k) = eig.eigenvectors.col(k) * std::sqrt(eig.eigenvalues(k));
  }
  return out;
}

Vector align_loo(const SurrogateScores& full, const SurrogateScores& loo,
                 std::size_t removed_index) {
  const Index n = full.scores.size();
  if (loo.scores.size() + 1 != n || static_cast<Index>(removed_index) >= n) {
    throw Error(ErrorKind::InvalidInput,
                "align_loo: leave-one-out length " + std::to_string(loo.scores.size()) +
                    " does not match full length " + std::to_string(n) + " minus one");
  }

  Vector target(n - 1);
  for (Index i = 0, k = 0; i < n; ++i) {
    if (i != static_cast<Index>(removed_index)) target(k++) = full.scores(i);
  }

  const double target_mean = target.mean();
  const double loo_mean = loo.scores.mean();
  const double cov = (target.array() - target_mean).matrix().dot(
      (loo.scores.array() - loo_mean).matrix());
  const double sign = cov < 0.0 ? -1.0 : 1.0;
  const double offset = target_mean - sign * loo_mean;
  return (sign * loo.scores.array() + offset).matrix();
}

}  // namespace mcooks
