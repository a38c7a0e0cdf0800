#include "metric_cooks/diagnostics.hpp"

#include <cmath>
#include <string>

#include "metric_cooks/error.hpp"

namespace mcooks {

namespace {

using linalg::Index;

void check_rows(const Matrix& x, Index n) {
  if (x.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "predictor rows (" + std::to_string(x.rows()) +
                                                  ") do not match responses (" +
                                                  std::to_string(n) + ")");
  }
  if (x.cols() == 0) throw Error(ErrorKind::InvalidInput, "predictor matrix has no columns");
}

Matrix drop_row(const Matrix& m, Index row) {
  Matrix out(m.rows() - 1, m.cols());
  out.topRows(row) = m.topRows(row);
  out.bottomRows(m.rows() - row - 1) = m.bottomRows(m.rows() - row - 1);
  return out;
}

Vector drop_entry(const Vector& v, Index row) {
  Vector out(v.size() - 1);
  out.head(row) = v.head(row);
  out.tail(v.size() - row - 1) = v.tail(v.size() - row - 1);
  return out;
}

/// Shared between the metric pipeline and the literal-deletion oracle.
struct QuadraticForm {
  Matrix gram;  // X~'X~ of the full design
  Vector beta;
  double denominator;  // (p + 1) * s^2

  double operator()(const Vector& beta_loo) const {
    const Vector diff = beta_loo - beta;
    return diff.dot(gram * diff) / denominator;
  }
};

QuadraticForm make_form(const Matrix& design, const OlsFit& fit, const Vector& response) {
  const double rss = fit.residuals.squaredNorm();
  if (!(rss > 1e-24 * response.squaredNorm())) {
    throw Error(ErrorKind::PerfectFit, "residual variance is zero; Cook's distance undefined");
  }
  return {design.transpose() * design, fit.coefficients,
          static_cast<double>(fit.p + 1) * fit.s_squared};
}

}  // namespace

Matrix augment(const Matrix& x) {
  Matrix out(x.rows(), x.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(x.cols()) = x;
  return out;
}

OlsFit fit_ols(const Matrix& x, const Vector& s) {
  check_rows(x, s.size());
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  if (n < p + 2) {
    throw Error(ErrorKind::InsufficientData, "need n >= p + 2 observations for s^2 (n = " +
                                                 std::to_string(n) + ", p = " +
                                                 std::to_string(p) + ")");
  }
  const Matrix design = augment(x);
  OlsFit fit;
  fit.coefficients = linalg::least_squares(design, s);
  fit.residuals = s - design * fit.coefficients;
  fit.s_squared = fit.residuals.squaredNorm() / static_cast<double>(n - p - 1);
  fit.n = n;
  fit.p = p;
  return fit;
}

double default_threshold(std::size_t n, std::size_t p) {
  if (n < p + 2) {
    throw Error(ErrorKind::InsufficientData, "threshold needs n >= p + 2");
  }
  return 4.0 / static_cast<double>(n - p - 1);
}

CooksReport metric_cooks(const Matrix& x, const ResponseSet& rs, Parallelism parallelism) {
  check_rows(x, static_cast<Index>(rs.size()));
  return metric_cooks(x, pairwise_distances(rs, parallelism), parallelism);
}

CooksReport metric_cooks(const Matrix& x, const DistanceMatrix& d, Parallelism parallelism) {
  const auto n = static_cast<Index>(d.order());
  check_rows(x, n);
  const auto p = static_cast<std::size_t>(x.cols());

  const SurrogateScores full = surrogate_from_distances(d);
  if (full.degenerate()) {
    throw Error(ErrorKind::NoSignal, "all response objects coincide; surrogate is identically zero");
  }
  const OlsFit fit = fit_ols(x, full.scores);
  const Matrix design = augment(x);
  const QuadraticForm form = make_form(design, fit, full.scores);

  CooksReport report;
  report.distances = Vector::Zero(n);
  report.status.assign(static_cast<std::size_t>(n), LooStatus::Ok);
  report.threshold = default_threshold(static_cast<std::size_t>(n), p);
  report.leading_eigenvalue = full.leading_eigenvalue;

  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t i) {
        const auto row = static_cast<Index>(i);
        const SurrogateScores loo = surrogate_from_distances(d.without(i));
        if (loo.degenerate()) report.status[i] = LooStatus::DegenerateLoo;
        const Vector aligned = align_loo(full, loo, i);
        const Vector beta_loo = linalg::solve_design(drop_row(design, row), aligned);
        report.distances(row) = form(beta_loo);
      },
      parallelism);

  report.fit = fit;
  report.flagged = flag(report);
  return report;
}

Vector literal_deletion_cooks(const Matrix& x, const Vector& y) {
  const OlsFit fit = fit_ols(x, y);
  const Matrix design = augment(x);
  const QuadraticForm form = make_form(design, fit, y);

  const Index n = design.rows();
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    out(i) = form(linalg::solve_design(drop_row(design, i), drop_entry(y, i)));
  }
  return out;
}

std::vector<std::size_t> flag(const CooksReport& report, std::optional<double> threshold_override) {
  double threshold = report.threshold;
  if (threshold_override) {
    if (!(*threshold_override > 0.0)) {
      throw Error(ErrorKind::InvalidInput, "threshold must be positive");
    }
    threshold = *threshold_override;
  }
  std::vector<std::size_t> out;
  for (Index i = 0; i < report.distances.size(); ++i) {
    if (report.distances(i) > threshold) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace mcooks
