#include "metric_cooks/sdr.hpp"

#include <cmath>
#include <string>

#include "metric_cooks/error.hpp"
#include "metric_cooks/mds.hpp"

namespace mcooks {

namespace {

using linalg::Index;

Matrix select_rows(const Matrix& x, const std::vector<std::size_t>& keep) {
  Matrix out(static_cast<Index>(keep.size()), x.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.row(static_cast<Index>(k)) = x.row(static_cast<Index>(keep[k]));
  }
  return out;
}

}  // namespace

BasisEstimate basis_from_fit(const OlsFit& fit) {
  const Vector raw = fit.coefficients.tail(fit.coefficients.size() - 1);
  const double norm = raw.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorKind::NoSignal, "surrogate regression has an all-zero slope");
  }
  Vector direction = raw / norm;
  linalg::canonicalize_sign(direction);
  return {direction, raw};
}

BasisEstimate estimate_basis(const Matrix& x, const DistanceMatrix& d) {
  const SurrogateScores s = surrogate_from_distances(d);
  if (s.degenerate()) {
    throw Error(ErrorKind::NoSignal, "all response objects coincide; surrogate is identically zero");
  }
  return basis_from_fit(fit_ols(x, s.scores));
}

BasisEstimate estimate_basis(const Matrix& x, const ResponseSet& rs, Parallelism parallelism) {
  if (x.rows() != static_cast<Index>(rs.size())) {
    throw Error(ErrorKind::DimensionMismatch, "predictor rows do not match responses");
  }
  return estimate_basis(x, pairwise_distances(rs, parallelism));
}

double projection_delta(const Vector& b1, const Vector& b2) {
  if (b1.size() != b2.size()) {
    throw Error(ErrorKind::InvalidInput, "projection_delta: vectors differ in length");
  }
  const double n1 = b1.norm();
  const double n2 = b2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "projection_delta: zero vector has no span");
  }
  const Vector u1 = b1 / n1;
  const Vector u2 = b2 / n2;
  return linalg::frobenius_dist(u1 * u1.transpose(), u2 * u2.transpose());
}

TrimResult trim_and_refit(const Matrix& x, const DistanceMatrix& d,
                          std::optional<double> threshold_override, Parallelism parallelism) {
  TrimResult out;
  out.report = metric_cooks(x, d, parallelism);
  out.basis_all = basis_from_fit(out.report.fit);
  out.trimmed = flag(out.report, threshold_override);
  if (out.trimmed.empty()) {
    out.basis_trimmed = out.basis_all;
    return out;
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0, t = 0; i < d.order(); ++i) {
    if (t < out.trimmed.size() && out.trimmed[t] == i) {
      ++t;
    } else {
      keep.push_back(i);
    }
  }
  const auto p = static_cast<std::size_t>(x.cols());
  if (keep.size() < p + 3) {
    throw Error(ErrorKind::TooFewAfterTrim,
                std::to_string(keep.size()) + " observations remain after trimming; need at least " +
                    std::to_string(p + 3));
  }
  out.basis_trimmed = estimate_basis(select_rows(x, keep), d.submatrix(keep));
  return out;
}

TrimResult trim_and_refit(const Matrix& x, const ResponseSet& rs,
                          std::optional<double> threshold_override, Parallelism parallelism) {
  if (x.rows() != static_cast<Index>(rs.size())) {
    throw Error(ErrorKind::DimensionMismatch, "predictor rows do not match responses");
  }
  return trim_and_refit(x, pairwise_distances(rs, parallelism), threshold_override, parallelism);
}

}  // namespace mcooks
