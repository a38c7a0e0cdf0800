#include "metric_cooks/simgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <tuple>

#include "metric_cooks/error.hpp"
#include "metric_cooks/rng.hpp"
#include "metric_cooks/sdr.hpp"

namespace mcooks {

namespace {

using linalg::Index;

// Stream tags for derive_seed.
constexpr std::uint64_t kPredictorStream = 1;
constexpr std::uint64_t kResponseStream = 2;

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kStudentDof = 20;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::InvalidInput, message);
}

double plogis(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double poisson(CounterRng& rng, double mean) {
  return static_cast<double>(std::poisson_distribution<long>(mean)(rng));
}

/// Correlated bivariate noise: N(0, [[1, .5], [.5, 1]]).
std::array<double, 2> correlated_noise(CounterRng& rng) {
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  return {z1, 0.5 * z1 + std::sqrt(0.75) * z2};
}

std::vector<double> sorted_uniform_times(CounterRng& rng, std::size_t count) {
  std::vector<double> t(count);
  for (auto& v : t) v = 10.0 * rng.uniform();
  std::sort(t.begin(), t.end());
  return t;
}

double intercept_curve(double t) { return 2.0 * std::sin(kPi + kPi * t / 5.0); }

template <typename F>
ResponseSet::Objects build(std::size_t n, F&& make_one) {
  using T = decltype(make_one(std::size_t{0}));
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_one(i));
  return out;
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ull;
  }
}

template <typename T>
void fnv_mix(std::uint64_t& h, const T& value) {
  fnv_mix(h, &value, sizeof(T));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string_view to_string(ModelId id) noexcept {
  static constexpr std::array<std::string_view, 8> kNames = {"I", "II", "III", "IV",
                                                             "V", "VI", "VII", "VIII"};
  const auto k = static_cast<int>(id);
  return (k >= 1 && k <= 8) ? kNames[static_cast<std::size_t>(k - 1)] : "?";
}

ModelId parse_model(std::string_view name) {
  for (int k = 1; k <= 8; ++k) {
    const auto id = static_cast<ModelId>(k);
    if (name == to_string(id) || name == std::to_string(k)) return id;
  }
  invalid("unknown model id '" + std::string(name) + "'");
}

Space model_space(ModelId id) {
  switch (id) {
    case ModelId::I:
    case ModelId::II: return Space::Euclidean;
    case ModelId::III:
    case ModelId::IV: return Space::Distribution;
    case ModelId::V:
    case ModelId::VI: return Space::Network;
    case ModelId::VII:
    case ModelId::VIII: return Space::Functional;
  }
  invalid("unknown model id " + std::to_string(static_cast<int>(id)));
}

Vector ModelSpec::beta() const {
  if (true_beta.size() > 0) return true_beta;
  Vector b = Vector::Zero(static_cast<Index>(p));
  if (p == 1) {
    b(0) = 1.0;
  } else if (p > 1) {
    b(0) = b(1) = 1.0 / std::numbers::sqrt2;
  }
  return b;
}

Metric ModelSpec::response_metric() const {
  return metric.value_or(default_metric(model_space(model)));
}

void ModelSpec::validate() const {
  const Space space = model_space(model);
  if (p < 1) invalid("model spec needs p >= 1");
  if (n < p + 3) {
    invalid("model spec needs n >= p + 3 (n = " + std::to_string(n) + ", p = " +
            std::to_string(p) + ")");
  }
  const Vector b = beta();
  if (b.size() != static_cast<Index>(p)) invalid("true beta length differs from p");
  if (std::abs(b.norm() - 1.0) > 1e-12) invalid("true beta must have unit norm");
  if (!metric_valid_for(space, response_metric())) {
    invalid("metric '" + std::string(to_string(response_metric())) + "' does not suit model " +
            std::string(to_string(model)));
  }
  if (space == Space::Network && graph_nodes < 2) invalid("graphs need at least two nodes");
  if (space == Space::Distribution && distribution_samples < 1) {
    invalid("distributions need at least one sample");
  }
  if (space == Space::Functional && curve_points < 2) invalid("curves need at least two points");
  if (!(noise_scale >= 0.0)) invalid("noise scale must be nonnegative");
}

std::uint64_t ModelSpec::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  fnv_mix(h, static_cast<int>(model));
  fnv_mix(h, static_cast<std::uint64_t>(n));
  fnv_mix(h, static_cast<std::uint64_t>(p));
  const Vector b = beta();
  for (Index i = 0; i < b.size(); ++i) fnv_mix(h, b(i));
  fnv_mix(h, static_cast<std::uint64_t>(graph_nodes));
  fnv_mix(h, static_cast<std::uint64_t>(distribution_samples));
  fnv_mix(h, static_cast<std::uint64_t>(curve_points));
  fnv_mix(h, noise_scale);
  fnv_mix(h, static_cast<int>(response_metric()));
  fnv_mix(h, metric_options.diffusion_time);
  fnv_mix(h, metric_options.diffusion_maximize);
  fnv_mix(h, static_cast<std::uint64_t>(metric_options.fourier_grid));
  fnv_mix(h, static_cast<std::uint64_t>(metric_options.fourier_coeffs));
  return h;
}

Matrix gen_predictors(std::size_t n, std::size_t p, std::uint64_t seed) {
  CounterRng rng(seed);
  Matrix x(static_cast<Index>(n), static_cast<Index>(p));
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
    double chi2 = 0.0;
    for (std::size_t k = 0; k < kStudentDof; ++k) {
      const double z = rng.normal();
      chi2 += z * z;
    }
    x.row(i) *= std::sqrt(static_cast<double>(kStudentDof) / chi2);
  }
  return x;
}

ResponseSet gen_response(const ModelSpec& spec, const Matrix& x, std::uint64_t seed) {
  spec.validate();
  if (x.rows() != static_cast<Index>(spec.n) || x.cols() != static_cast<Index>(spec.p)) {
    throw Error(ErrorKind::DimensionMismatch, "predictor matrix does not match the model spec");
  }
  CounterRng rng(seed);
  const Vector index = x * spec.beta();
  const double noise = spec.noise_scale;
  const auto u = [&](std::size_t i) { return index(static_cast<Index>(i)); };

  ResponseSet::Objects objects;
  switch (spec.model) {
    case ModelId::I:
      // sin(pi/2 + B'x) with B = (beta, -2 beta).
      objects = build(spec.n, [&](std::size_t i) {
        const auto e = correlated_noise(rng);
        return EuclideanPoint{{std::sin(kPi / 2 + u(i)) + noise * e[0],
                               std::sin(kPi / 2 - 2.0 * u(i)) + noise * e[1]}};
      });
      break;
    case ModelId::II:
      objects = build(spec.n, [&](std::size_t i) {
        const auto e = correlated_noise(rng);
        const double a = u(i);
        const double b = -2.0 * u(i);
        return EuclideanPoint{{0.8 * a * a * a + noise * e[0], 0.8 * b * b * b + noise * e[1]}};
      });
      break;
    case ModelId::III:
      // 0.6 N(u, 1) + 0.4 N(-u, variance 2).
      objects = build(spec.n, [&](std::size_t i) {
        EmpiricalDistribution d;
        d.samples.resize(spec.distribution_samples);
        for (auto& s : d.samples) {
          const bool first = rng.uniform() < 0.6;
          const double z = rng.normal();
          s = first ? u(i) + z : -u(i) + std::numbers::sqrt2 * z;
        }
        return d;
      });
      break;
    case ModelId::IV:
      objects = build(spec.n, [&](std::size_t i) {
        EmpiricalDistribution d;
        d.samples.resize(spec.distribution_samples);
        const double mean = std::exp(u(i));
        for (auto& s : d.samples) s = poisson(rng, mean);
        return d;
      });
      break;
    case ModelId::V:
      objects = build(spec.n, [&](std::size_t i) {
        const auto k = static_cast<Index>(spec.graph_nodes);
        const double prob = plogis(std::sin(u(i)));
        Matrix a = Matrix::Zero(k, k);
        for (Index r = 0; r < k; ++r) {
          for (Index c = r + 1; c < k; ++c) {
            if (rng.uniform() < prob) a(r, c) = a(c, r) = 1.0;
          }
        }
        return LabeledGraph(std::move(a));
      });
      break;
    case ModelId::VI:
      // Blocks drawn per node with proportions (0.4, 0.3, 0.3); edge weights
      // Poisson(15 [same block] + ceil(exp(u))).
      objects = build(spec.n, [&](std::size_t i) {
        const auto k = static_cast<Index>(spec.graph_nodes);
        std::vector<int> block(static_cast<std::size_t>(k));
        for (auto& b : block) {
          const double v = rng.uniform();
          b = v < 0.4 ? 0 : (v < 0.7 ? 1 : 2);
        }
        const double shared = std::ceil(std::exp(u(i)));
        Matrix a = Matrix::Zero(k, k);
        for (Index r = 0; r < k; ++r) {
          for (Index c = r + 1; c < k; ++c) {
            const bool same = block[static_cast<std::size_t>(r)] == block[static_cast<std::size_t>(c)];
            a(r, c) = a(c, r) = poisson(rng, (same ? 15.0 : 0.0) + shared);
          }
        }
        return LabeledGraph(std::move(a));
      });
      break;
    case ModelId::VII:
      objects = build(spec.n, [&](std::size_t i) {
        SampledCurve c;
        c.times = sorted_uniform_times(rng, spec.curve_points);
        c.values.reserve(c.times.size());
        for (double t : c.times) {
          c.values.push_back(intercept_curve(t) + 2.0 * std::sin(kPi * t / 2.0 + u(i)) +
                             noise * rng.normal());
        }
        return c;
      });
      break;
    case ModelId::VIII:
      objects = build(spec.n, [&](std::size_t i) {
        SampledCurve c;
        c.times = sorted_uniform_times(rng, spec.curve_points);
        c.values.reserve(c.times.size());
        for (double t : c.times) {
          c.values.push_back(intercept_curve(t) + std::sin(kPi * t / 2.0 + u(i)) +
                             std::sin(kPi * t / 2.0 - u(i)) + noise * rng.normal());
        }
        return c;
      });
      break;
    default:
      invalid("unknown model id " + std::to_string(static_cast<int>(spec.model)));
  }
  return ResponseSet(std::move(objects), spec.response_metric(), spec.metric_options);
}

std::uint64_t replication_seed(std::uint64_t base_seed, const ModelSpec& spec,
                               std::size_t replication) {
  return derive_seed(derive_seed(base_seed, spec.fingerprint()), replication);
}

ReplicationOutcome run_replication(const ModelSpec& spec, std::uint64_t seed) {
  const Matrix x = gen_predictors(spec.n, spec.p, derive_seed(seed, kPredictorStream));
  const ResponseSet rs = gen_response(spec, x, derive_seed(seed, kResponseStream));
  const Parallelism serial{1};
  const TrimResult trim = trim_and_refit(x, rs, std::nullopt, serial);
  const Vector truth = spec.beta();
  return {projection_delta(trim.basis_all.direction, truth),
          projection_delta(trim.basis_trimmed.direction, truth), trim.trimmed.size()};
}

std::vector<ExperimentRow> run_experiment(const std::vector<ModelSpec>& specs,
                                          std::size_t replications, std::uint64_t base_seed,
                                          Parallelism parallelism) {
  if (replications < 1) invalid("need at least one replication");
  for (const auto& spec : specs) spec.validate();

  struct Slot {
    std::optional<ReplicationOutcome> outcome;
    std::string error;
  };
  std::vector<Slot> slots(specs.size() * replications);
  parallel_for(
      slots.size(),
      [&](std::size_t job) {
        const ModelSpec& spec = specs[job / replications];
        const std::size_t r = job % replications;
        try {
          slots[job].outcome = run_replication(spec, replication_seed(base_seed, spec, r));
        } catch (const Error& e) {
          slots[job].error = e.what();
        }
      },
      parallelism);

  std::vector<ExperimentRow> rows;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    ExperimentRow row;
    row.spec = specs[s];
    std::vector<double> all;
    std::vector<double> trimmed;
    double flagged = 0.0;
    for (std::size_t r = 0; r < replications; ++r) {
      const Slot& slot = slots[s * replications + r];
      if (slot.outcome) {
        all.push_back(slot.outcome->delta_all);
        trimmed.push_back(slot.outcome->delta_trimmed);
        flagged += static_cast<double>(slot.outcome->flagged);
      } else {
        ++row.failures;
        if (row.first_failure.empty()) row.first_failure = slot.error;
      }
    }
    row.replications = all.size();
    row.failed = row.failures * 10 > replications || all.empty();
    if (!all.empty()) {
      row.mean_delta_all = mean_of(all);
      row.sd_delta_all = sd_of(all, row.mean_delta_all);
      row.mean_delta_trimmed = mean_of(trimmed);
      row.sd_delta_trimmed = sd_of(trimmed, row.mean_delta_trimmed);
      row.mean_flagged = flagged / static_cast<double>(all.size());
    } else {
      row.mean_delta_all = row.sd_delta_all = row.mean_delta_trimmed = row.sd_delta_trimmed =
          row.mean_flagged = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    return std::make_tuple(static_cast<int>(a.spec.model), a.spec.n, a.spec.p,
                           static_cast<int>(a.spec.response_metric())) <
           std::make_tuple(static_cast<int>(b.spec.model), b.spec.n, b.spec.p,
                           static_cast<int>(b.spec.response_metric()));
  });
  return rows;
}

}  // namespace mcooks
