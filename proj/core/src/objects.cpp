#include "metric_cooks/objects.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>

#include "metric_cooks/error.hpp"

namespace mcooks {

namespace {

using linalg::Index;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::InvalidInput, message);
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void validate(const EuclideanPoint& p) {
  if (p.coords.empty()) invalid("euclidean point has no coordinates");
  if (!all_finite(p.coords)) invalid("euclidean point has non-finite coordinates");
}

void validate(const EmpiricalDistribution& d) {
  if (d.samples.empty()) invalid("empirical distribution has no samples");
  if (!all_finite(d.samples)) invalid("empirical distribution has non-finite samples");
}

void validate(const SampledCurve& c) {
  if (c.times.size() != c.values.size()) invalid("curve times and values differ in length");
  if (c.times.size() < 2) invalid("curve needs at least two points");
  if (!all_finite(c.times) || !all_finite(c.values)) invalid("curve has non-finite entries");
  for (std::size_t i = 1; i < c.times.size(); ++i) {
    if (!(c.times[i] > c.times[i - 1])) invalid("curve times must be strictly increasing");
  }
}

double wasserstein_sorted(const std::vector<double>& a, const std::vector<double>& b, int k) {
  const auto quantile = [](const std::vector<double>& sorted, double s) {
    const auto m = static_cast<double>(sorted.size());
    auto idx = static_cast<std::size_t>(std::ceil(m * s));
    idx = std::clamp<std::size_t>(idx, 1, sorted.size());
    return sorted[idx - 1];
  };

  double total = 0.0;
  std::size_t count = 0;
  const auto accumulate = [&](double x, double y) {
    const double gap = std::abs(x - y);
    total += (k == 1) ? gap : gap * gap;
    ++count;
  };

  if (a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) accumulate(a[i], b[i]);
  } else {
    for (std::size_t j = 1; j <= kWassersteinGrid; ++j) {
      const double s = (static_cast<double>(j) - 0.5) / static_cast<double>(kWassersteinGrid);
      accumulate(quantile(a, s), quantile(b, s));
    }
  }
  const double mean = total / static_cast<double>(count);
  return (k == 1) ? mean : std::sqrt(mean);
}

std::vector<double> sorted_copy(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  return s;
}

void check_order(int k) {
  if (k != 1 && k != 2) invalid("wasserstein order must be 1 or 2, got " + std::to_string(k));
}

void check_same_nodes(const LabeledGraph& g1, const LabeledGraph& g2) {
  if (g1.node_count() != g2.node_count()) {
    invalid("graphs differ in node count (" + std::to_string(g1.node_count()) + " vs " +
            std::to_string(g2.node_count()) + ")");
  }
}

std::vector<double> diffusion_times(double t, bool maximize) {
  if (!maximize) {
    if (!(t > 0.0) || !std::isfinite(t)) invalid("diffusion time must be positive");
    return {t};
  }
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<Matrix> heat_kernels(const LabeledGraph& g, const std::vector<double>& times) {
  const linalg::SymMatrix laplacian = g.laplacian();
  const linalg::EigenDecomposition eig = linalg::sym_eig(laplacian);
  std::vector<Matrix> kernels;
  kernels.reserve(times.size());
  for (double t : times) {
    const Vector w = (-t * eig.eigenvalues.array()).exp().matrix();
    kernels.push_back(linalg::SymMatrix::symmetrized(eig.eigenvectors * w.asDiagonal() *
                                                     eig.eigenvectors.transpose())
                          .matrix());
  }
  return kernels;
}

double kernel_distance(const std::vector<Matrix>& k1, const std::vector<Matrix>& k2) {
  double best = 0.0;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    best = std::max(best, (k1[i] - k2[i]).squaredNorm());
  }
  return std::sqrt(best);
}

/// Cosine/sine tables for a truncated DFT of fixed length.
struct FourierPlan {
  std::size_t grid;
  std::size_t coeffs;
  std::vector<double> cos_table;
  std::vector<double> sin_table;

  FourierPlan(std::size_t grid_size, std::size_t keep) : grid(grid_size), coeffs(keep) {
    if (grid < 2) invalid("fourier grid size must be at least 2");
    if (coeffs < 1 || coeffs > grid) invalid("fourier coefficient count must be in [1, grid]");
    cos_table.resize(grid * coeffs);
    sin_table.resize(grid * coeffs);
    for (std::size_t k = 0; k < coeffs; ++k) {
      for (std::size_t j = 0; j < grid; ++j) {
        // Reduce j*k mod grid so the angle stays in [0, 2pi).
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % grid) /
                             static_cast<double>(grid);
        cos_table[k * grid + j] = std::cos(angle);
        sin_table[k * grid + j] = std::sin(angle);
      }
    }
  }

  double distance(const SampledCurve& a, const SampledCurve& b) const {
    const double lo = std::max(a.times.front(), b.times.front());
    const double hi = std::min(a.times.back(), b.times.back());
    if (!(hi > lo)) invalid("curves have disjoint time ranges");

    std::vector<double> diff(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      const double tau =
          (j + 1 == grid) ? hi
                          : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid - 1);
      diff[j] = interpolate(a, tau) - interpolate(b, tau);
    }

    double total = 0.0;
    for (std::size_t k = 0; k < coeffs; ++k) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t j = 0; j < grid; ++j) {
        re += diff[j] * cos_table[k * grid + j];
        im -= diff[j] * sin_table[k * grid + j];
      }
      total += re * re + im * im;
    }
    return std::sqrt(total) / static_cast<double>(grid);
  }

  static double interpolate(const SampledCurve& c, double tau) {
    const auto& t = c.times;
    auto upper = std::upper_bound(t.begin(), t.end(), tau);
    if (upper == t.begin()) return c.values.front();
    if (upper == t.end()) return c.values.back();
    const auto hi = static_cast<std::size_t>(upper - t.begin());
    const std::size_t lo = hi - 1;
    const double w = (tau - t[lo]) / (t[hi] - t[lo]);
    return c.values[lo] + w * (c.values[hi] - c.values[lo]);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// LabeledGraph

LabeledGraph::LabeledGraph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols() || adjacency_.rows() == 0) {
    invalid("adjacency must be square and non-empty");
  }
  if (!adjacency_.allFinite()) invalid("adjacency has non-finite entries");
  for (Index i = 0; i < adjacency_.rows(); ++i) {
    if (adjacency_(i, i) != 0.0) invalid("adjacency diagonal must be zero");
    for (Index j = 0; j < adjacency_.cols(); ++j) {
      if (adjacency_(i, j) < 0.0) invalid("adjacency weights must be nonnegative");
      if (adjacency_(i, j) != adjacency_(j, i)) invalid("adjacency must be symmetric");
    }
  }
}

std::vector<double> LabeledGraph::degrees() const {
  std::vector<double> deg(node_count(), 0.0);
  for (Index i = 0; i < adjacency_.rows(); ++i) {
    for (Index j = 0; j < adjacency_.cols(); ++j) {
      if (adjacency_(i, j) > 0.0) deg[static_cast<std::size_t>(i)] += 1.0;
    }
  }
  return deg;
}

linalg::SymMatrix LabeledGraph::laplacian() const {
  Matrix l = -adjacency_;
  for (Index i = 0; i < adjacency_.rows(); ++i) l(i, i) = adjacency_.row(i).sum();
  return linalg::SymMatrix(std::move(l));
}

// ---------------------------------------------------------------------------
// Space / metric tags

std::string_view to_string(Space space) noexcept {
  switch (space) {
    case Space::Euclidean: return "euclidean";
    case Space::Distribution: return "distribution";
    case Space::Network: return "network";
    case Space::Functional: return "functional";
  }
  return "unknown";
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::L2: return "l2";
    case Metric::Wasserstein1: return "wasserstein1";
    case Metric::Wasserstein2: return "wasserstein2";
    case Metric::Centrality: return "centrality";
    case Metric::Diffusion: return "diffusion";
    case Metric::Fourier: return "fourier";
  }
  return "unknown";
}

Space parse_space(std::string_view name) {
  for (Space s : {Space::Euclidean, Space::Distribution, Space::Network, Space::Functional}) {
    if (to_string(s) == name) return s;
  }
  invalid("unknown response space '" + std::string(name) + "'");
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::L2, Metric::Wasserstein1, Metric::Wasserstein2, Metric::Centrality,
                   Metric::Diffusion, Metric::Fourier}) {
    if (to_string(m) == name) return m;
  }
  invalid("unknown metric '" + std::string(name) + "'");
}

bool metric_valid_for(Space space, Metric metric) noexcept {
  switch (space) {
    case Space::Euclidean: return metric == Metric::L2;
    case Space::Distribution:
      return metric == Metric::Wasserstein1 || metric == Metric::Wasserstein2;
    case Space::Network: return metric == Metric::Centrality || metric == Metric::Diffusion;
    case Space::Functional: return metric == Metric::Fourier;
  }
  return false;
}

Metric default_metric(Space space) noexcept {
  switch (space) {
    case Space::Euclidean: return Metric::L2;
    case Space::Distribution: return Metric::Wasserstein1;
    case Space::Network: return Metric::Diffusion;
    case Space::Functional: return Metric::Fourier;
  }
  return Metric::L2;
}

// ---------------------------------------------------------------------------
// ResponseSet

ResponseSet::ResponseSet(Objects objects, Metric metric, MetricOptions options)
    : objects_(std::move(objects)), metric_(metric), options_(options) {
  if (!metric_valid_for(space(), metric_)) {
    invalid("metric '" + std::string(to_string(metric_)) + "' is not defined on space '" +
            std::string(to_string(space())) + "'");
  }
  if (size() < 2) invalid("response set needs at least two objects");
  if (metric_ == Metric::Diffusion && !options_.diffusion_maximize &&
      !(options_.diffusion_time > 0.0 && std::isfinite(options_.diffusion_time))) {
    invalid("diffusion time must be positive");
  }
  if (metric_ == Metric::Fourier) FourierPlan(options_.fourier_grid, options_.fourier_coeffs);

  std::visit(
      [](const auto& list) {
        using T = typename std::decay_t<decltype(list)>::value_type;
        for (std::size_t i = 0; i < list.size(); ++i) {
          if constexpr (std::is_same_v<T, LabeledGraph>) {
            if (list[i].node_count() != list[0].node_count()) {
              invalid("graph " + std::to_string(i) + " has a different node count");
            }
          } else {
            try {
              validate(list[i]);
            } catch (const Error& e) {
              invalid("object " + std::to_string(i) + ": " + e.what());
            }
            if constexpr (std::is_same_v<T, EuclideanPoint>) {
              if (list[i].coords.size() != list[0].coords.size()) {
                invalid("point " + std::to_string(i) + " has a different dimension");
              }
            }
          }
        }
      },
      objects_);
}

std::size_t ResponseSet::size() const noexcept {
  return std::visit([](const auto& list) { return list.size(); }, objects_);
}

ResponseSet ResponseSet::subset(const std::vector<std::size_t>& indices) const {
  Objects picked = std::visit(
      [&](const auto& list) -> Objects {
        std::decay_t<decltype(list)> out;
        out.reserve(indices.size());
        for (std::size_t i : indices) out.push_back(list.at(i));
        return out;
      },
      objects_);
  return ResponseSet(std::move(picked), metric_, options_);
}

ResponseSet ResponseSet::with_metric(Metric metric) const {
  return ResponseSet(objects_, metric, options_);
}

// ---------------------------------------------------------------------------
// DistanceMatrix

DistanceMatrix::DistanceMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    invalid("distance matrix must be square and non-empty");
  }
  if (!entries_.allFinite()) invalid("distance matrix has non-finite entries");
  for (Index i = 0; i < entries_.rows(); ++i) {
    if (entries_(i, i) != 0.0) invalid("distance matrix diagonal must be zero");
    for (Index j = i + 1; j < entries_.cols(); ++j) {
      if (entries_(i, j) < 0.0) invalid("distances must be nonnegative");
      if (entries_(i, j) != entries_(j, i)) invalid("distance matrix must be symmetric");
    }
  }
}

DistanceMatrix DistanceMatrix::submatrix(const std::vector<std::size_t>& keep) const {
  const auto k = static_cast<Index>(keep.size());
  Matrix out(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      out(a, b) = entries_(static_cast<Index>(keep.at(static_cast<std::size_t>(a))),
                           static_cast<Index>(keep.at(static_cast<std::size_t>(b))));
    }
  }
  return DistanceMatrix(std::move(out));
}

DistanceMatrix DistanceMatrix::without(std::size_t index) const {
  std::vector<std::size_t> keep;
  keep.reserve(order() - 1);
  for (std::size_t i = 0; i < order(); ++i) {
    if (i != index) keep.push_back(i);
  }
  return submatrix(keep);
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
  if (!(factor > 0.0)) invalid("distance scale factor must be positive");
  return DistanceMatrix(entries_ * factor);
}

// ---------------------------------------------------------------------------
// Element metrics

double dist_euclidean(const EuclideanPoint& a, const EuclideanPoint& b) {
  if (a.coords.size() != b.coords.size()) {
    invalid("points differ in dimension (" + std::to_string(a.coords.size()) + " vs " +
            std::to_string(b.coords.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    total += d * d;
  }
  return std::sqrt(total);
}

double dist_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b, int k) {
  check_order(k);
  validate(a);
  validate(b);
  return wasserstein_sorted(sorted_copy(a.samples), sorted_copy(b.samples), k);
}

double dist_centrality(const LabeledGraph& g1, const LabeledGraph& g2) {
  check_same_nodes(g1, g2);
  const auto d1 = g1.degrees();
  const auto d2 = g2.degrees();
  double total = 0.0;
  for (std::size_t v = 0; v < d1.size(); ++v) total += std::abs(d1[v] - d2[v]);
  return total;
}

double dist_diffusion(const LabeledGraph& g1, const LabeledGraph& g2, double t,
                      bool maximize_over_grid) {
  check_same_nodes(g1, g2);
  const auto times = diffusion_times(t, maximize_over_grid);
  return kernel_distance(heat_kernels(g1, times), heat_kernels(g2, times));
}

double dist_fourier(const SampledCurve& a, const SampledCurve& b, std::size_t grid_size,
                    std::size_t keep_coeffs) {
  validate(a);
  validate(b);
  return FourierPlan(grid_size, keep_coeffs).distance(a, b);
}

// ---------------------------------------------------------------------------
// Pairwise

DistanceMatrix pairwise_distances(const ResponseSet& rs, Parallelism parallelism) {
  const std::size_t n = rs.size();
  const MetricOptions& opt = rs.options();

  // Per-object preparation, then one evaluation per unordered pair.
  std::function<double(std::size_t, std::size_t)> pair;
  std::vector<std::vector<double>> sorted;
  std::vector<std::vector<double>> degrees;
  std::vector<std::vector<Matrix>> kernels;
  std::optional<FourierPlan> plan;

  switch (rs.metric()) {
    case Metric::L2: {
      const auto& pts = std::get<std::vector<EuclideanPoint>>(rs.objects());
      pair = [&pts](std::size_t i, std::size_t j) { return dist_euclidean(pts[i], pts[j]); };
      break;
    }
    case Metric::Wasserstein1:
    case Metric::Wasserstein2: {
      const auto& dists = std::get<std::vector<EmpiricalDistribution>>(rs.objects());
      for (const auto& d : dists) sorted.push_back(sorted_copy(d.samples));
      const int k = rs.metric() == Metric::Wasserstein1 ? 1 : 2;
      pair = [&sorted, k](std::size_t i, std::size_t j) {
        return wasserstein_sorted(sorted[i], sorted[j], k);
      };
      break;
    }
    case Metric::Centrality: {
      const auto& graphs = std::get<std::vector<LabeledGraph>>(rs.objects());
      for (const auto& g : graphs) degrees.push_back(g.degrees());
      pair = [&degrees](std::size_t i, std::size_t j) {
        double total = 0.0;
        for (std::size_t v = 0; v < degrees[i].size(); ++v) {
          total += std::abs(degrees[i][v] - degrees[j][v]);
        }
        return total;
      };
      break;
    }
    case Metric::Diffusion: {
      const auto& graphs = std::get<std::vector<LabeledGraph>>(rs.objects());
      const auto times = diffusion_times(opt.diffusion_time, opt.diffusion_maximize);
      kernels.resize(n);
      parallel_for(
          n, [&](std::size_t i) { kernels[i] = heat_kernels(graphs[i], times); }, parallelism);
      pair = [&kernels](std::size_t i, std::size_t j) {
        return kernel_distance(kernels[i], kernels[j]);
      };
      break;
    }
    case Metric::Fourier: {
      const auto& curves = std::get<std::vector<SampledCurve>>(rs.objects());
      plan.emplace(opt.fourier_grid, opt.fourier_coeffs);
      pair = [&curves, &plan](std::size_t i, std::size_t j) {
        return plan->distance(curves[i], curves[j]);
      };
      break;
    }
  }

  Matrix d = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double value;
          try {
            value = pair(i, j);
          } catch (const Error& e) {
            throw Error(e.kind(), "objects (" + std::to_string(i) + ", " + std::to_string(j) +
                                      "): " + e.what());
          }
          d(static_cast<Index>(i), static_cast<Index>(j)) = value;
          d(static_cast<Index>(j), static_cast<Index>(i)) = value;
        }
      },
      parallelism);
  return DistanceMatrix(std::move(d));
}

}  // namespace mcooks
