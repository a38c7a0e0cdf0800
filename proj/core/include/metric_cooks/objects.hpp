#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "metric_cooks/linalg.hpp"
#include "metric_cooks/parallel.hpp"

namespace mcooks {

using linalg::Matrix;
using linalg::Vector;

struct EuclideanPoint {
  std::vector<double> coords;
};

/// Raw draws from a univariate distribution; quantiles come from the sorted
/// sample.
struct EmpiricalDistribution {
  std::vector<double> samples;
};

/// Undirected weighted graph on a fixed, shared node labeling.
class LabeledGraph {
 public:
  /// Throws InvalidInput unless adjacency is square, symmetric, finite,
  /// nonnegative and has a zero diagonal.
  explicit LabeledGraph(Matrix adjacency);

  std::size_t node_count() const noexcept { return static_cast<std::size_t>(adjacency_.rows()); }
  const Matrix& adjacency() const noexcept { return adjacency_; }

  /// Number of neighbours of each node, ignoring weights.
  std::vector<double> degrees() const;

  /// D - A, using the edge weights.
  linalg::SymMatrix laplacian() const;

 private:
  Matrix adjacency_;
};

struct SampledCurve {
  std::vector<double> times;
  std::vector<double> values;
};

enum class Space { Euclidean, Distribution, Network, Functional };
enum class Metric { L2, Wasserstein1, Wasserstein2, Centrality, Diffusion, Fourier };

std::string_view to_string(Space space) noexcept;
std::string_view to_string(Metric metric) noexcept;
Space parse_space(std::string_view name);
Metric parse_metric(std::string_view name);
bool metric_valid_for(Space space, Metric metric) noexcept;
Metric default_metric(Space space) noexcept;

/// Tuning for the metrics that take parameters.
struct MetricOptions {
  double diffusion_time = 1.0;
  bool diffusion_maximize = false;
  std::size_t fourier_grid = 64;
  std::size_t fourier_coeffs = 32;
};

/// Homogeneous collection of response objects with the metric used on them.
class ResponseSet {
 public:
  using Objects = std::variant<std::vector<EuclideanPoint>, std::vector<EmpiricalDistribution>,
                               std::vector<LabeledGraph>, std::vector<SampledCurve>>;

  /// Validates every object, the shared dimension (points, graphs) and the
  /// metric/space pairing. At least two objects are required.
  ResponseSet(Objects objects, Metric metric, MetricOptions options = {});

  Space space() const noexcept { return static_cast<Space>(objects_.index()); }
  Metric metric() const noexcept { return metric_; }
  const MetricOptions& options() const noexcept { return options_; }
  const Objects& objects() const noexcept { return objects_; }
  std::size_t size() const noexcept;

  /// Copy holding only the listed objects, in the listed order.
  ResponseSet subset(const std::vector<std::size_t>& indices) const;
  ResponseSet with_metric(Metric metric) const;

 private:
  Objects objects_;
  Metric metric_;
  MetricOptions options_;
};

/// Symmetric, zero-diagonal, nonnegative, finite square matrix.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Matrix entries);

  std::size_t order() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<linalg::Index>(i), static_cast<linalg::Index>(j));
  }
  const Matrix& matrix() const noexcept { return entries_; }

  /// Rows and columns of `keep`, in order.
  DistanceMatrix submatrix(const std::vector<std::size_t>& keep) const;
  /// Every row and column except `index`.
  DistanceMatrix without(std::size_t index) const;
  DistanceMatrix scaled(double factor) const;

 private:
  Matrix entries_;
};

double dist_euclidean(const EuclideanPoint& a, const EuclideanPoint& b);
/// Wasserstein-k between empirical distributions, k in {1, 2}. Equal sample
/// sizes pair order statistics; otherwise both quantile functions are read on
/// a 1000-point mid-point grid.
double dist_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b, int k);
/// Sum over nodes of absolute degree differences (edges unweighted).
double dist_centrality(const LabeledGraph& g1, const LabeledGraph& g2);
/// ||exp(-tL1) - exp(-tL2)||_F, or the maximum over t in {0.1, ..., 3.0} when
/// `maximize_over_grid` is set (then `t` is ignored).
double dist_diffusion(const LabeledGraph& g1, const LabeledGraph& g2, double t = 1.0,
                      bool maximize_over_grid = false);
/// l2 norm of the first `keep_coeffs` DFT coefficients (scaled by 1/grid) of
/// the difference of both curves, linearly interpolated on a uniform grid over
/// the intersection of their time ranges.
double dist_fourier(const SampledCurve& a, const SampledCurve& b, std::size_t grid_size = 64,
                    std::size_t keep_coeffs = 32);

inline constexpr std::size_t kWassersteinGrid = 1000;

DistanceMatrix pairwise_distances(const ResponseSet& rs, Parallelism parallelism = {});

}  // namespace mcooks
