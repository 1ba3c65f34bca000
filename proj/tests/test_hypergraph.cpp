#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rbm/errors.hpp"
#include "rbm/hypergraph.hpp"
#include "rbm/poisson.hpp"
#include "rbm/sampler.hpp"

namespace rbm {
namespace {

Hypergraph random_hypergraph(Rng& rng, std::size_t n, std::size_t m, std::size_t k) {
  Hypergraph h(n, k);
  for (std::size_t e = 0; e < m; ++e) {
    const auto s = oracle::rejection_subset(rng, n, k);
    h.add_edge(s);
  }
  return h;
}

std::vector<std::vector<std::uint32_t>> edges_of(const Hypergraph& h) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    const auto s = h.edge(e);
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

// Independent evaluation of Pr(Po(x) <= j) by summing terms in log space.
double cdf_oracle(double x, long j) {
  if (j < 0) return 0.0;
  double total = 0.0;
  for (long i = 0; i <= j; ++i) {
    total += std::exp(-x + static_cast<double>(i) * std::log(x) - std::lgamma(i + 1.0));
  }
  return total;
}

double g_oracle(double x, double c, std::size_t k, std::size_t d) {
  const double q = 1.0 - cdf_oracle(x, static_cast<long>(d) - 2);
  return x / std::pow(q, static_cast<double>(k - 1)) - c;
}

// True when g changes sign somewhere on a fine grid over (0, c].
bool grid_finds_root(double c, std::size_t k, std::size_t d) {
  const int steps = 20000;
  double prev = g_oracle(c, c, k, d);
  for (int s = steps - 1; s >= 1; --s) {
    const double x = c * s / steps;
    const double cur = g_oracle(x, c, k, d);
    if ((prev >= 0) != (cur >= 0)) return true;
    prev = cur;
  }
  return false;
}

TEST(FromColumnsTest, SingleColumn) {
  const GF2Matrix m = GF2Matrix::from_dense({{1}, {0}, {1}});
  const Hypergraph h = from_columns(m, {0, 1}, 2);
  ASSERT_EQ(h.num_edges(), 1u);
  EXPECT_EQ(std::vector<Vertex>(h.edge(0).begin(), h.edge(0).end()), (std::vector<Vertex>{0, 2}));
}

TEST(FromColumnsTest, WrongWeightThrows) {
  EXPECT_THROW(from_columns(GF2Matrix::identity(3), {0, 3}, 2), NonUniformColumn);
}

TEST(FromColumnsTest, DisjointEdges) {
  const GF2Matrix m = GF2Matrix::from_dense(
      {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  const Hypergraph h = from_columns(m, {0, 3}, 2);
  EXPECT_EQ(h.num_edges(), 3u);
  EXPECT_EQ(h.degrees(), std::vector<std::size_t>(6, 1));
}

TEST(FromColumnsTest, RangeSelectsSuffix) {
  const ColumnSupports s = sample_columns({.n = 20, .m = 10, .k = 3, .seed = 1});
  const Hypergraph h = from_columns(s, {4, 10}, 3);
  ASSERT_EQ(h.num_edges(), 6u);
  for (std::size_t e = 0; e < 6; ++e) {
    EXPECT_EQ(std::vector<Vertex>(h.edge(e).begin(), h.edge(e).end()), s.columns[4 + e]);
  }
}

TEST(DCoreTest, WholeGraphWhenDegreesSuffice) {
  Hypergraph h(4, 2);
  for (auto e : std::vector<std::vector<Vertex>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}}) h.add_edge(e);
  const CoreResult c = d_core(h, 2);
  EXPECT_EQ(c.vertices, (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(c.edge_indices, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_TRUE(c.peel_order.empty());
}

TEST(DCoreTest, SingleEdgeVanishes) {
  Hypergraph h(3, 3);
  const std::vector<Vertex> e{0, 1, 2};
  h.add_edge(e);
  const CoreResult c = d_core(h, 2);
  EXPECT_TRUE(c.vertices.empty());
  EXPECT_TRUE(c.edge_indices.empty());
  EXPECT_TRUE(is_valid_peel_witness(h, 2, c));
}

TEST(DCoreTest, OneCoreDropsIsolatedVerticesOnly) {
  Hypergraph h(5, 2);
  const std::vector<Vertex> e{1, 3};
  h.add_edge(e);
  EXPECT_EQ(d_core(h, 1).vertices, (std::vector<Vertex>{1, 3}));
}

TEST(DCoreTest, MatchesNaiveOracleUnderRandomOrders) {
  Rng rng(17);
  for (int inst = 0; inst < 50; ++inst) {
    const Hypergraph h = random_hypergraph(rng, 30, 20, 3);
    const auto expected = oracle::naive_core(30, edges_of(h), 2);
    std::vector<Vertex> order(30);
    std::iota(order.begin(), order.end(), 0);
    for (int p = 0; p < 10; ++p) {
      std::shuffle(order.begin(), order.end(), rng);
      const CoreResult c = d_core(h, 2, order);
      EXPECT_EQ(c.vertices, expected.first);
      EXPECT_EQ(c.edge_indices, expected.second);
      EXPECT_TRUE(is_valid_peel_witness(h, 2, c));
    }
  }
}

TEST(DCoreTest, SurvivorsHaveDegreeAtLeastD) {
  Rng rng(23);
  const Hypergraph h = random_hypergraph(rng, 2000, 3000, 4);
  for (std::size_t d : {2u, 3u, 5u}) {
    const CoreResult c = d_core(h, d);
    std::vector<std::size_t> deg(h.n_vertices(), 0);
    for (std::size_t e : c.edge_indices) {
      for (Vertex v : h.edge(e)) ++deg[v];
    }
    for (Vertex v : c.vertices) EXPECT_GE(deg[v], d);
    EXPECT_TRUE(is_valid_peel_witness(h, d, c));
  }
}

TEST(DCoreTest, MonotoneInD) {
  Rng rng(29);
  for (int inst = 0; inst < 20; ++inst) {
    const Hypergraph h = random_hypergraph(rng, 200, 300, 3);
    for (std::size_t d = 1; d < 6; ++d) {
      const auto lo = d_core(h, d).vertices;
      const auto hi = d_core(h, d + 1).vertices;
      EXPECT_TRUE(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
    }
  }
}

TEST(DCoreTest, TamperedWitnessIsRejected) {
  Rng rng(31);
  const Hypergraph h = random_hypergraph(rng, 100, 120, 3);
  CoreResult c = d_core(h, 2);
  ASSERT_FALSE(c.peel_order.empty());
  ASSERT_FALSE(c.vertices.empty());
  CoreResult extra = c;
  extra.peel_order.push_back({c.vertices.front(), 99});
  EXPECT_FALSE(is_valid_peel_witness(h, 2, extra));
  CoreResult missing = c;
  missing.vertices.pop_back();
  EXPECT_FALSE(is_valid_peel_witness(h, 2, missing));
}

TEST(PoissonCdfTest, AgreesWithLogSpaceOracle) {
  for (double x : {0.5, 3.0, 17.0, 120.0, 400.0}) {
    for (long j : {0L, 1L, 5L, 50L, 150L, 390L}) {
      EXPECT_NEAR(poisson_cdf(x, j), cdf_oracle(x, j), 1e-10) << x << ' ' << j;
    }
  }
  EXPECT_EQ(poisson_cdf(2.0, -1), 0.0);
}

TEST(CorePredictionTest, WidelySupercriticalRoot) {
  const CorePrediction p = core_prediction(200.0, 20, 100);
  ASSERT_FALSE(p.subcritical);
  EXPECT_GE(p.x, 150.0);
  EXPECT_LE(p.x, 200.0);
}

TEST(CorePredictionTest, SubcriticalWhenGridFindsNoRoot) {
  for (std::size_t k : {40u, 50u}) {
    const double c = k / 4.0;
    const std::size_t d = k / 10;
    EXPECT_FALSE(grid_finds_root(c, k, d));
    const CorePrediction p = core_prediction(c, k, d);
    EXPECT_TRUE(p.subcritical) << "k = " << k;
    EXPECT_EQ(p.vertex_fraction, 0.0);
    EXPECT_EQ(p.edge_fraction, 0.0);
  }
}

TEST(CorePredictionTest, LargeKSatisfiesCoreBounds) {
  for (std::size_t k : {80u, 100u, 120u}) {
    const double c = k / 4.0;
    const std::size_t d = k / 10;
    ASSERT_TRUE(grid_finds_root(c, k, d));
    const CorePrediction p = core_prediction(c, k, d);
    ASSERT_FALSE(p.subcritical);
    EXPECT_GE(p.vertex_fraction, 1.0 - 1.0 / k);
    // m2 = m1 * edge_fraction with m1 = n/4, n2 = n * vertex_fraction.
    EXPECT_GE(p.edge_fraction / 4.0, p.vertex_fraction / 5.0);
  }
}

TEST(CorePredictionTest, RootReproducesC) {
  struct Case {
    double c;
    std::size_t k, d;
  };
  for (const Case& cs : {Case{20.0, 80, 8}, Case{200.0, 20, 100}, Case{800.0, 40, 400},
                         Case{3.0, 3, 2}, Case{8.0, 4, 3}}) {
    SCOPED_TRACE(testing::Message() << "c=" << cs.c << " k=" << cs.k << " d=" << cs.d);
    ASSERT_TRUE(grid_finds_root(cs.c, cs.k, cs.d));
    const CorePrediction p = core_prediction(cs.c, cs.k, cs.d);
    ASSERT_FALSE(p.subcritical);
    const double c = core_fixed_point_rhs(p.x, cs.k, cs.d);
    EXPECT_LT(std::abs(c - cs.c) / cs.c, 1e-9);
    EXPECT_NEAR(p.vertex_fraction, 1.0 - cdf_oracle(p.x, static_cast<long>(cs.d) - 1), 1e-9);
    EXPECT_NEAR(p.edge_fraction,
                std::pow(p.x / cs.c, static_cast<double>(cs.k) / (cs.k - 1)), 1e-12);
    EXPECT_GE(p.vertex_fraction, 0.0);
    EXPECT_LE(p.vertex_fraction, 1.0);
    EXPECT_GE(p.edge_fraction, 0.0);
    EXPECT_LE(p.edge_fraction, 1.0);
  }
}

TEST(CorePredictionTest, GreatestRootIsReturned) {
  // No root of the oracle equation lies strictly above the returned x.
  const double c = 20.0;
  const CorePrediction p = core_prediction(c, 80, 8);
  ASSERT_FALSE(p.subcritical);
  const double sign = g_oracle(c, c, 80, 8) >= 0 ? 1.0 : -1.0;
  for (int s = 1; s <= 1000; ++s) {
    const double x = p.x + (c - p.x) * s / 1000.0 + 1e-6;
    if (x > c) break;
    EXPECT_EQ(g_oracle(x, c, 80, 8) >= 0 ? 1.0 : -1.0, sign);
  }
}

TEST(CorePredictionTest, EmpiricalCoreNearPrediction) {
  const std::size_t n = 20000, k = 3, d = 2;
  const ColumnSupports s = sample_columns({.n = n, .m = n, .k = k, .seed = 7});
  const CoreResult c = d_core(from_columns(s, {0, n}, k), d);
  const CorePrediction p = core_prediction(static_cast<double>(k), k, d);
  ASSERT_FALSE(p.subcritical);
  EXPECT_NEAR(static_cast<double>(c.vertices.size()) / n, p.vertex_fraction, 0.02);
  EXPECT_NEAR(static_cast<double>(c.edge_indices.size()) / n, p.edge_fraction, 0.02);
}

}  // namespace
}  // namespace rbm
