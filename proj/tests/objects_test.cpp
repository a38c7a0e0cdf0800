#include "metric_cooks/objects.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "metric_cooks/error.hpp"
#include "test_support.hpp"

namespace mcooks {
namespace {

using testing::kind_of;
using testing::random_graph;

LabeledGraph graph(std::size_t nodes, std::initializer_list<std::pair<int, int>> edges) {
  Matrix a = Matrix::Zero(static_cast<linalg::Index>(nodes), static_cast<linalg::Index>(nodes));
  for (auto [i, j] : edges) a(i, j) = a(j, i) = 1.0;
  return LabeledGraph(std::move(a));
}

SampledCurve random_curve(std::mt19937_64& gen, double lo, double hi, std::size_t points) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  SampledCurve c;
  c.times = {lo, hi};
  for (std::size_t i = 2; i < points; ++i) c.times.push_back(lo + (hi - lo) * unit(gen));
  std::sort(c.times.begin(), c.times.end());
  for (std::size_t i = 0; i < points; ++i) c.values.push_back(normal(gen));
  return c;
}

EmpiricalDistribution random_distribution(std::mt19937_64& gen, std::size_t m, double shift) {
  std::normal_distribution<double> normal(shift, 1.0 + 0.3 * std::abs(shift));
  EmpiricalDistribution d;
  for (std::size_t i = 0; i < m; ++i) d.samples.push_back(normal(gen));
  return d;
}

TEST(Euclidean, HandValues) {
  EXPECT_EQ(dist_euclidean({{0, 0}}, {{0, 0}}), 0.0);
  EXPECT_DOUBLE_EQ(dist_euclidean({{0, 0}}, {{3, 4}}), 5.0);
  EXPECT_EQ(kind_of([] { dist_euclidean({{0, 0}}, {{1}}); }), ErrorKind::InvalidInput);
}

TEST(Euclidean, Symmetric) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 50; ++i) {
    EuclideanPoint a{{normal(gen), normal(gen), normal(gen)}};
    EuclideanPoint b{{normal(gen), normal(gen), normal(gen)}};
    EXPECT_EQ(dist_euclidean(a, b), dist_euclidean(b, a));
  }
}

TEST(Wasserstein, HandValues) {
  const EmpiricalDistribution a{{1, 2, 3}};
  EXPECT_EQ(dist_wasserstein(a, a, 1), 0.0);
  EXPECT_EQ(dist_wasserstein(a, a, 2), 0.0);
  EXPECT_DOUBLE_EQ(dist_wasserstein({{0, 0}}, {{3, 3}}, 1), 3.0);
  EXPECT_DOUBLE_EQ(dist_wasserstein({{0, 0}}, {{3, 3}}, 2), 3.0);
  EXPECT_NEAR(dist_wasserstein({{3, 1, 2}}, {{4, 2, 3}}, 1), 1.0, 1e-12);
}

TEST(Wasserstein, UnequalSizesUseQuantileGrid) {
  // Quantile of {0, 2} is 0 on s <= 1/2 and 2 above; half the grid differs by 2.
  EXPECT_DOUBLE_EQ(dist_wasserstein({{0}}, {{0, 2}}, 1), 1.0);
  EXPECT_DOUBLE_EQ(dist_wasserstein({{0}}, {{0, 2}}, 2), std::sqrt(2.0));
}

TEST(Wasserstein, Errors) {
  EXPECT_EQ(kind_of([] { dist_wasserstein({{}}, {{1}}, 1); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { dist_wasserstein({{1}}, {{1}}, 3); }), ErrorKind::InvalidInput);
}

TEST(Wasserstein, EqualSizePathAgreesWithGridPath) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_distribution(gen, 40, 0.5 * (trial % 3));
    const auto b = random_distribution(gen, 40, -1.0);
    // Appending a copy of every sample leaves the distribution unchanged but
    // forces the grid path.
    EmpiricalDistribution a2 = a;
    a2.samples.insert(a2.samples.end(), a.samples.begin(), a.samples.end());
    const auto [lo_a, hi_a] = std::minmax_element(a.samples.begin(), a.samples.end());
    const auto [lo_b, hi_b] = std::minmax_element(b.samples.begin(), b.samples.end());
    const double range = std::max(*hi_a, *hi_b) - std::min(*lo_a, *lo_b);
    for (int k : {1, 2}) {
      EXPECT_NEAR(dist_wasserstein(a, b, k), dist_wasserstein(a2, b, k),
                  2.0 / static_cast<double>(kWassersteinGrid) * range);
    }
  }
}

TEST(Centrality, HandValues) {
  const auto path = graph(3, {{0, 1}, {1, 2}});
  const auto triangle = graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto empty = graph(3, {});
  EXPECT_EQ(dist_centrality(path, path), 0.0);
  EXPECT_EQ(dist_centrality(path, triangle), 2.0);
  EXPECT_EQ(dist_centrality(empty, triangle), 6.0);
  EXPECT_EQ(kind_of([&] { dist_centrality(path, graph(2, {})); }), ErrorKind::InvalidInput);
}

TEST(Centrality, IgnoresWeights) {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 7.5;
  w(1, 2) = w(2, 1) = 0.25;
  EXPECT_EQ(dist_centrality(LabeledGraph(w), graph(3, {{0, 1}, {1, 2}})), 0.0);
}

TEST(Diffusion, SingleEdgeByHand) {
  const auto empty = graph(2, {});
  const auto edge = graph(2, {{0, 1}});
  EXPECT_NEAR(dist_diffusion(empty, edge, 1.0), 1.0 - std::exp(-2.0), 1e-10);
  EXPECT_EQ(dist_diffusion(empty, edge), dist_diffusion(edge, empty));
  // 1 - exp(-2t) grows in t, so the grid maximum sits at t = 3.
  EXPECT_NEAR(dist_diffusion(empty, edge, 1.0, true), 1.0 - std::exp(-6.0), 1e-10);
}

TEST(Diffusion, ZeroOnIdenticalGraphs) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(gen, 8, 0.4, trial % 2 == 0);
    for (double t : {0.1, 1.0, 2.7}) EXPECT_EQ(dist_diffusion(g, g, t), 0.0);
    EXPECT_EQ(dist_diffusion(g, g, 1.0, true), 0.0);
  }
}

TEST(Diffusion, Errors) {
  EXPECT_EQ(kind_of([] { dist_diffusion(graph(2, {}), graph(3, {}), 1.0); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { dist_diffusion(graph(2, {}), graph(2, {}), 0.0); }),
            ErrorKind::InvalidInput);
}

TEST(LabeledGraph, Validation) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_EQ(kind_of([&] { LabeledGraph{m}; }), ErrorKind::InvalidInput);
  m(1, 0) = 1.0;
  m(0, 0) = 1.0;
  EXPECT_EQ(kind_of([&] { LabeledGraph{m}; }), ErrorKind::InvalidInput);
  m(0, 0) = 0.0;
  m(0, 1) = m(1, 0) = -1.0;
  EXPECT_EQ(kind_of([&] { LabeledGraph{m}; }), ErrorKind::InvalidInput);
}

TEST(Fourier, ConstantCurvesDifferByZeroFrequencyOnly) {
  const SampledCurve a{{0, 4, 10}, {1.5, 1.5, 1.5}};
  const SampledCurve b{{0, 3, 7, 10}, {-2, -2, -2, -2}};
  EXPECT_EQ(dist_fourier(a, a), 0.0);
  EXPECT_NEAR(dist_fourier(a, b), 3.5, 1e-12);
}

TEST(Fourier, KeepsPhase) {
  // Same amplitude, shifted phase: a magnitude-only spectrum would see zero.
  SampledCurve a, b;
  for (int j = 0; j <= 100; ++j) {
    const double t = j / 10.0;
    a.times.push_back(t);
    b.times.push_back(t);
    a.values.push_back(std::sin(2.0 * std::numbers::pi * t / 10.0));
    b.values.push_back(std::cos(2.0 * std::numbers::pi * t / 10.0));
  }
  EXPECT_GT(dist_fourier(a, b), 0.1);
}

TEST(Fourier, Errors) {
  const SampledCurve a{{0, 1}, {0, 0}};
  const SampledCurve b{{2, 3}, {0, 0}};
  EXPECT_EQ(kind_of([&] { dist_fourier(a, b); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { dist_fourier({{0}, {1}}, {{0, 1}, {0, 0}}); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([&] { dist_fourier(a, a, 8, 9); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { dist_fourier({{0, 0}, {1, 2}}, {{0, 1}, {0, 0}}); }),
            ErrorKind::InvalidInput);
}

// Metric axioms on random triples. Curves share their end points so every
// pair is compared on the same grid.
TEST(MetricAxioms, TriangleInequalityOnRandomTriples) {
  std::mt19937_64 gen(24);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::function<double(int, int)>> checks;

    std::vector<EuclideanPoint> pts(3);
    for (auto& p : pts) p.coords = {normal(gen), normal(gen)};
    checks.push_back([&](int i, int j) { return dist_euclidean(pts[i], pts[j]); });

    std::vector<EmpiricalDistribution> dists;
    for (int i = 0; i < 3; ++i) dists.push_back(random_distribution(gen, 25 + 5 * i, normal(gen)));
    checks.push_back([&](int i, int j) { return dist_wasserstein(dists[i], dists[j], 1); });
    checks.push_back([&](int i, int j) { return dist_wasserstein(dists[i], dists[j], 2); });

    std::vector<LabeledGraph> graphs;
    for (int i = 0; i < 3; ++i) graphs.push_back(random_graph(gen, 7, 0.5, true));
    checks.push_back([&](int i, int j) { return dist_centrality(graphs[i], graphs[j]); });
    checks.push_back([&](int i, int j) { return dist_diffusion(graphs[i], graphs[j], 0.7); });

    std::vector<SampledCurve> curves;
    for (int i = 0; i < 3; ++i) curves.push_back(random_curve(gen, 0.0, 10.0, 20));
    checks.push_back([&](int i, int j) { return dist_fourier(curves[i], curves[j]); });

    for (const auto& d : checks) {
      for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(d(i, i), 0.0);
        for (int j = 0; j < 3; ++j) {
          EXPECT_GE(d(i, j), 0.0);
          EXPECT_NEAR(d(i, j), d(j, i), 1e-12);
          const int k = 3 - i - j;
          if (i != j) EXPECT_LE(d(i, j), d(i, k) + d(k, j) + 1e-9);
        }
      }
    }
  }
}

TEST(ResponseSet, Validation) {
  EXPECT_EQ(kind_of([] { ResponseSet(std::vector<EuclideanPoint>{{{1}}, {{2}}}, Metric::Fourier); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { ResponseSet(std::vector<EuclideanPoint>{{{1}}, {{2, 3}}}, Metric::L2); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { ResponseSet(std::vector<EuclideanPoint>{{{1}}}, Metric::L2); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] {
              ResponseSet(std::vector<LabeledGraph>{graph(2, {}), graph(3, {})},
                          Metric::Centrality);
            }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] {
              ResponseSet(std::vector<EmpiricalDistribution>{{{1}}, {{}}}, Metric::Wasserstein1);
            }),
            ErrorKind::InvalidInput);
}

TEST(ResponseSet, Tags) {
  for (Space s : {Space::Euclidean, Space::Distribution, Space::Network, Space::Functional}) {
    EXPECT_EQ(parse_space(to_string(s)), s);
    EXPECT_TRUE(metric_valid_for(s, default_metric(s)));
  }
  EXPECT_EQ(default_metric(Space::Distribution), Metric::Wasserstein1);
  EXPECT_EQ(default_metric(Space::Network), Metric::Diffusion);
  EXPECT_EQ(kind_of([] { parse_metric("hellinger"); }), ErrorKind::InvalidInput);
}

TEST(PairwiseDistances, HandValues) {
  const auto d = pairwise_distances(testing::scalar_set(Vector::LinSpaced(2, 0.0, 3.0)));
  EXPECT_EQ(d(0, 1), 3.0);
  EXPECT_EQ(d(1, 0), 3.0);
  EXPECT_EQ(d(0, 0), 0.0);

  const auto same = pairwise_distances(
      ResponseSet(std::vector<LabeledGraph>(4, graph(3, {{0, 1}})), Metric::Diffusion));
  EXPECT_EQ(same.matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(PairwiseDistances, MatchesBruteForceForEveryMetric) {
  std::mt19937_64 gen(25);
  std::normal_distribution<double> normal;
  const std::size_t n = 9;

  std::vector<EuclideanPoint> pts(n);
  for (auto& p : pts) p.coords = {normal(gen), normal(gen), normal(gen)};
  std::vector<EmpiricalDistribution> dists;
  for (std::size_t i = 0; i < n; ++i) dists.push_back(random_distribution(gen, 10 + i % 3, normal(gen)));
  std::vector<LabeledGraph> graphs;
  for (std::size_t i = 0; i < n; ++i) graphs.push_back(random_graph(gen, 6, 0.5, true));
  std::vector<SampledCurve> curves;
  for (std::size_t i = 0; i < n; ++i) {
    curves.push_back(random_curve(gen, 0.1 * normal(gen), 10.0 + 0.1 * normal(gen), 15));
  }

  MetricOptions maximize;
  maximize.diffusion_maximize = true;
  MetricOptions small_grid;
  small_grid.fourier_grid = 16;
  small_grid.fourier_coeffs = 5;

  struct Case {
    ResponseSet set;
    std::function<double(std::size_t, std::size_t)> oracle;
  };
  std::vector<Case> cases = {
      {ResponseSet(pts, Metric::L2), [&](auto i, auto j) { return dist_euclidean(pts[i], pts[j]); }},
      {ResponseSet(dists, Metric::Wasserstein1),
       [&](auto i, auto j) { return dist_wasserstein(dists[i], dists[j], 1); }},
      {ResponseSet(dists, Metric::Wasserstein2),
       [&](auto i, auto j) { return dist_wasserstein(dists[i], dists[j], 2); }},
      {ResponseSet(graphs, Metric::Centrality),
       [&](auto i, auto j) { return dist_centrality(graphs[i], graphs[j]); }},
      {ResponseSet(graphs, Metric::Diffusion),
       [&](auto i, auto j) { return dist_diffusion(graphs[i], graphs[j], 1.0); }},
      {ResponseSet(graphs, Metric::Diffusion, maximize),
       [&](auto i, auto j) { return dist_diffusion(graphs[i], graphs[j], 1.0, true); }},
      {ResponseSet(curves, Metric::Fourier),
       [&](auto i, auto j) { return dist_fourier(curves[i], curves[j]); }},
      {ResponseSet(curves, Metric::Fourier, small_grid),
       [&](auto i, auto j) { return dist_fourier(curves[i], curves[j], 16, 5); }},
  };

  for (const auto& c : cases) {
    const auto serial = pairwise_distances(c.set, Parallelism{1});
    const auto threaded = pairwise_distances(c.set, Parallelism{4});
    EXPECT_EQ(serial.matrix(), threaded.matrix()) << to_string(c.set.metric());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_NEAR(serial(i, j), c.oracle(i, j), 1e-12) << to_string(c.set.metric());
      }
    }
  }
}

TEST(PairwiseDistances, ReportsOffendingPair) {
  std::vector<SampledCurve> curves = {{{0, 1}, {0, 0}}, {{0, 1}, {1, 1}}, {{5, 6}, {0, 0}}};
  try {
    pairwise_distances(ResponseSet(curves, Metric::Fourier), Parallelism{1});
    FAIL() << "expected disjoint time ranges to be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    EXPECT_NE(std::string(e.what()).find("(0, 2)"), std::string::npos) << e.what();
  }
}

TEST(DistanceMatrix, SubmatrixAndValidation) {
  Matrix m(3, 3);
  m << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  const DistanceMatrix d(m);
  const auto w = d.without(1);
  EXPECT_EQ(w.order(), 2u);
  EXPECT_EQ(w(0, 1), 2.0);
  EXPECT_EQ(d.scaled(10.0)(1, 2), 30.0);
  m(0, 0) = 1.0;
  EXPECT_EQ(kind_of([&] { DistanceMatrix{m}; }), ErrorKind::InvalidInput);
  m(0, 0) = 0.0;
  m(0, 1) = -1.0;
  m(1, 0) = -1.0;
  EXPECT_EQ(kind_of([&] { DistanceMatrix{m}; }), ErrorKind::InvalidInput);
}

}  // namespace
}  // namespace mcooks
