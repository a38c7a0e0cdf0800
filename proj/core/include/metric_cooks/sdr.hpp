#pragma once

#include <optional>
#include <vector>

#include "metric_cooks/diagnostics.hpp"
#include "metric_cooks/objects.hpp"

namespace mcooks {

/// Unit-norm estimate of the single-index direction.
struct BasisEstimate {
  Vector direction;
  Vector raw;
};

/// Slope part of an OLS fit, normalised and sign-fixed (largest |entry| > 0).
BasisEstimate basis_from_fit(const OlsFit& fit);

/// Surrogate OLS of the leading MDS score on X. Throws NoSignal when all
/// response objects coincide.
BasisEstimate estimate_basis(const Matrix& x, const ResponseSet& rs, Parallelism parallelism = {});
BasisEstimate estimate_basis(const Matrix& x, const DistanceMatrix& d);

/// Frobenius distance between the rank-one projections onto b1 and b2.
double projection_delta(const Vector& b1, const Vector& b2);

struct TrimResult {
  CooksReport report;
  BasisEstimate basis_all;
  BasisEstimate basis_trimmed;
  std::vector<std::size_t> trimmed;  // 0-based, ascending
};

/// Flags influential observations once, drops them and re-estimates the basis
/// on the remainder. TooFewAfterTrim if fewer than p + 3 observations remain.
TrimResult trim_and_refit(const Matrix& x, const ResponseSet& rs,
                          std::optional<double> threshold_override = std::nullopt,
                          Parallelism parallelism = {});
TrimResult trim_and_refit(const Matrix& x, const DistanceMatrix& d,
                          std::optional<double> threshold_override = std::nullopt,
                          Parallelism parallelism = {});

}  // namespace mcooks
