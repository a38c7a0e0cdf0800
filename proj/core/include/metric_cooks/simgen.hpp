#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metric_cooks/objects.hpp"
#include "metric_cooks/parallel.hpp"

namespace mcooks {

/// The eight simulation models: I-II Euclidean (R^2), III-IV distributions,
/// V-VI networks, VII-VIII functional.
enum class ModelId { I = 1, II, III, IV, V, VI, VII, VIII };

std::string_view to_string(ModelId id) noexcept;
/// Accepts roman ("II") or arabic ("2") numerals.
ModelId parse_model(std::string_view name);
Space model_space(ModelId id);

struct ModelSpec {
  ModelId model = ModelId::I;
  std::size_t n = 100;
  std::size_t p = 5;
  Vector true_beta;  // empty: (1, 1, 0, ..., 0) / sqrt(2)

  std::size_t graph_nodes = 10;
  std::size_t distribution_samples = 100;
  std::size_t curve_points = 30;
  double noise_scale = 0.5;

  std::optional<Metric> metric;  // empty: the space's default
  MetricOptions metric_options;

  Vector beta() const;
  Metric response_metric() const;
  /// InvalidInput unless n >= p + 3, beta has length p and unit norm, and the
  /// metric suits the model's space.
  void validate() const;
  /// Stable fingerprint used to key random streams.
  std::uint64_t fingerprint() const;
};

/// Rows i.i.d. multivariate t with 20 degrees of freedom, identity scale.
Matrix gen_predictors(std::size_t n, std::size_t p, std::uint64_t seed);

ResponseSet gen_response(const ModelSpec& spec, const Matrix& x, std::uint64_t seed);

struct ReplicationOutcome {
  double delta_all = 0.0;
  double delta_trimmed = 0.0;
  std::size_t flagged = 0;
};

/// One simulated dataset: predictors, responses, trim_and_refit, and the
/// projection distance of both bases to the true direction.
ReplicationOutcome run_replication(const ModelSpec& spec, std::uint64_t seed);

/// Seed of replication `replication` of `spec` under `base_seed`.
std::uint64_t replication_seed(std::uint64_t base_seed, const ModelSpec& spec,
                               std::size_t replication);

struct ExperimentRow {
  ModelSpec spec;
  std::size_t replications = 0;  // successful
  std::size_t failures = 0;
  double mean_delta_all = 0.0;
  double sd_delta_all = 0.0;
  double mean_delta_trimmed = 0.0;
  double sd_delta_trimmed = 0.0;
  double mean_flagged = 0.0;
  bool failed = false;  // more than 10% of replications failed
  std::string first_failure;
};

/// Runs `replications` independent datasets per spec. Replication failures are
/// counted, not thrown. Rows are sorted by (model, n, p, metric) and do not
/// depend on the thread count.
std::vector<ExperimentRow> run_experiment(const std::vector<ModelSpec>& specs,
                                          std::size_t replications, std::uint64_t base_seed,
                                          Parallelism parallelism = {});

}  // namespace mcooks
