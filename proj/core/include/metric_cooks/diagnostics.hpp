#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "metric_cooks/linalg.hpp"
#include "metric_cooks/mds.hpp"
#include "metric_cooks/objects.hpp"
#include "metric_cooks/parallel.hpp"

namespace mcooks {

/// Least-squares fit of a response on [1, X].
struct OlsFit {
  Vector coefficients;  // intercept first
  Vector residuals;
  double s_squared = 0.0;  // RSS / (n - p - 1)
  std::size_t n = 0;
  std::size_t p = 0;
};

enum class LooStatus { Ok, DegenerateLoo };

struct CooksReport {
  Vector distances;
  double threshold = 0.0;
  std::vector<std::size_t> flagged;  // 0-based, ascending
  OlsFit fit;
  std::vector<LooStatus> status;
  double leading_eigenvalue = 0.0;
};

/// Prepends a column of ones.
Matrix augment(const Matrix& x);

/// Requires n >= p + 2 (InsufficientData) and a full-rank augmented design.
OlsFit fit_ols(const Matrix& x, const Vector& s);

/// 4 / (n - p - 1).
double default_threshold(std::size_t n, std::size_t p);

/// Metric Cook's distances. Each deletion recomputes the MDS surrogate from
/// the reduced distance matrix, aligns it to the full surrogate and refits;
/// the quadratic form and s^2 come from the full fit. Requires n >= p + 2.
CooksReport metric_cooks(const Matrix& x, const ResponseSet& rs, Parallelism parallelism = {});
CooksReport metric_cooks(const Matrix& x, const DistanceMatrix& d, Parallelism parallelism = {});

/// Classical Cook's distances of a scalar response, refitting after literally
/// deleting each observation. Testing oracle for metric_cooks.
Vector literal_deletion_cooks(const Matrix& x, const Vector& y);

/// Indices with distance strictly above the threshold (the report's own unless
/// overridden), ascending. A nonpositive override is InvalidInput.
std::vector<std::size_t> flag(const CooksReport& report,
                              std::optional<double> threshold_override = std::nullopt);

}  // namespace mcooks
