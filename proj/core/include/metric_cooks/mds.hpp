#pragma once

#include <cstddef>

#include "metric_cooks/linalg.hpp"
#include "metric_cooks/objects.hpp"

namespace mcooks {

/// Leading metric-MDS factor score: v1 * sqrt(lambda1).
struct SurrogateScores {
  Vector scores;
  double leading_eigenvalue = 0.0;

  bool degenerate() const noexcept { return leading_eigenvalue == 0.0; }
};

/// -1/2 * Q D^2 Q with the centering projector Q = I - J/n.
linalg::SymMatrix double_center(const DistanceMatrix& d);

/// First factor score of a double-centered matrix. When lambda1 is not above
/// 1e-12 * max(1, |trace M|) all objects coincide and the zero vector is
/// returned with a zero eigenvalue.
SurrogateScores leading_score(const linalg::SymMatrix& m);

/// leading_score(double_center(d)).
SurrogateScores surrogate_from_distances(const DistanceMatrix& d);

/// All factor scores V * Lambda^{1/2} over the strictly positive eigenvalues,
/// one column per retained eigenvalue.
Matrix full_scores(const linalg::SymMatrix& m);

/// Removes the reflection and translation gauge of a leave-one-out score
/// vector: returns sign * loo + offset, fitted in least squares against the
/// full scores with entry `removed_index` (0-based) dropped. Ties in the sign
/// choice resolve to +1.
Vector align_loo(const SurrogateScores& full, const SurrogateScores& loo,
                 std::size_t removed_index);

}  // namespace mcooks
