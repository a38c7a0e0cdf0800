#include <benchmark/benchmark.h>

#include <random>

#include "metric_cooks/diagnostics.hpp"
#include "metric_cooks/linalg.hpp"
#include "metric_cooks/simgen.hpp"

using namespace mcooks;

namespace {

ModelSpec spec(ModelId model, std::size_t n, std::optional<Metric> metric = std::nullopt) {
  ModelSpec s;
  s.model = model;
  s.n = n;
  s.p = 5;
  s.metric = metric;
  return s;
}

void BM_SymEig(benchmark::State& state) {
  const auto n = static_cast<linalg::Index>(state.range(0));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  Matrix a(n, n);
  for (linalg::Index i = 0; i < n; ++i) {
    for (linalg::Index j = 0; j < n; ++j) a(i, j) = normal(gen);
  }
  const auto m = linalg::SymMatrix::symmetrized(a);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::sym_eig(m));
}
BENCHMARK(BM_SymEig)->Arg(50)->Arg(100)->Arg(200);

void BM_PairwiseDistances(benchmark::State& state) {
  const auto model = static_cast<ModelId>(state.range(0));
  const auto metric = state.range(1) ? std::optional<Metric>(Metric::Centrality) : std::nullopt;
  const ModelSpec s = spec(model, 100, metric);
  const ResponseSet rs = gen_response(s, gen_predictors(s.n, s.p, 3), 4);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(rs, Parallelism{1}));
  state.SetLabel(std::string(to_string(rs.metric())));
}
BENCHMARK(BM_PairwiseDistances)
    ->Args({1, 0})
    ->Args({3, 0})
    ->Args({5, 0})
    ->Args({5, 1})
    ->Args({7, 0});

void BM_MetricCooks(benchmark::State& state) {
  const ModelSpec s = spec(ModelId::II, static_cast<std::size_t>(state.range(0)));
  const Matrix x = gen_predictors(s.n, s.p, 5);
  const DistanceMatrix d = pairwise_distances(gen_response(s, x, 6));
  for (auto _ : state) benchmark::DoNotOptimize(metric_cooks(x, d, Parallelism{1}));
}
BENCHMARK(BM_MetricCooks)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Replication(benchmark::State& state) {
  const ModelSpec s = spec(static_cast<ModelId>(state.range(0)), 100);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(s, ++seed));
}
BENCHMARK(BM_Replication)->DenseRange(1, 8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
