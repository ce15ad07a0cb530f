#include <gtest/gtest.h>

#include <cmath>

#include "minorperc/generators.hpp"
#include "minorperc/percolation.hpp"
#include "minorperc/random.hpp"

using namespace minorperc;

TEST(Params, DerivedFields) {
  const auto pp = PercolationParams::make(100, 0.2);
  EXPECT_DOUBLE_EQ(pp.p, 1.2 / 100);
  EXPECT_DOUBLE_EQ(pp.p1, 1.1 / 100);
  EXPECT_LT(pp.p1, pp.p);
  EXPECT_GE(pp.p2, 0.2 / 200);
  EXPECT_NEAR(1.0 - (1.0 - pp.p1) * (1.0 - pp.p2), pp.p, 1e-15);
  EXPECT_THROW(PercolationParams::make(0, 0.2), ParameterError);
  EXPECT_THROW(PercolationParams::make(10, 0.0), ParameterError);
  EXPECT_THROW(PercolationParams::make(1, 0.5), ParameterError);
}

TEST(Percolate, Extremes) {
  const Graph g = complete_graph(12);
  EXPECT_EQ(percolate(g, 0.0, 3).num_edges(), 0u);
  EXPECT_EQ(percolate(g, 0.0, 3).num_vertices(), 12u);
  EXPECT_EQ(percolate(g, 1.0, 3), g);
  EXPECT_THROW(percolate(g, 1.5, 3), ParameterError);
}

TEST(Percolate, DeterministicAndSpanning) {
  const Graph g = hypercube_graph(6);
  const Graph a = percolate(g, 0.4, 11);
  EXPECT_EQ(a, percolate(g, 0.4, 11));
  a.for_each_edge([&](Vertex u, Vertex v) { EXPECT_TRUE(g.has_edge(u, v)); });
  EXPECT_NE(a, percolate(g, 0.4, 12));
}

TEST(Percolate, KFourMeanMatchesBinomial) {
  const Graph k4 = complete_graph(4);
  constexpr int kTrials = 10000;
  double total = 0.0;
  for (int t = 0; t < kTrials; ++t) total += static_cast<double>(percolate(k4, 0.5, derive_seed(77, t)).num_edges());
  const double mean = total / kTrials;
  const double sigma = std::sqrt(6 * 0.25 / kTrials);
  EXPECT_NEAR(mean, 3.0, 3 * sigma);
}

TEST(Sprinkle, Examples) {
  const Graph host = complete_graph(6);
  EXPECT_EQ(sprinkle(host, host, 0.3, 1), host);
  const Graph base = percolate(host, 0.5, 4);
  EXPECT_EQ(sprinkle(base, host, 0.0, 1), base);
  const Graph k4 = complete_graph(4);
  EXPECT_EQ(sprinkle(Graph(4), k4, 1.0, 1), k4);
}

TEST(Sprinkle, RejectsNonSubgraphBase) {
  EXPECT_THROW(sprinkle(complete_graph(4), cycle_graph(4), 0.5, 1), ParameterError);
  EXPECT_THROW(sprinkle(Graph(3), complete_graph(4), 0.5, 1), ParameterError);
}

TEST(Oracle, IdempotentAndCounted) {
  const Graph host = complete_graph(30);
  EdgeOracle o(host, 0.5, 9);
  const bool first = o.query(3, 17);
  EXPECT_EQ(o.query(3, 17), first);
  EXPECT_EQ(o.query(17, 3), first);
  EXPECT_EQ(o.draws(), 1u);
  EXPECT_TRUE(o.revealed(17, 3));
  EXPECT_FALSE(o.revealed(3, 4));
  for (Vertex u = 0; u < 30; ++u) {
    for (Vertex v = 0; v < 30; ++v) {
      if (u != v) o.query(u, v);
    }
  }
  EXPECT_EQ(o.draws(), host.num_edges());
}

TEST(Oracle, ProbabilityOneAlwaysPresent) {
  const Graph host = cycle_graph(5);
  EdgeOracle o(host, 1.0, 1);
  EXPECT_TRUE(o.query(0, 1));
  EXPECT_TRUE(o.query(4, 0));
}

TEST(Oracle, NonHostQueryIsContractError) {
  const Graph host = path_graph(4);
  EdgeOracle o(host, 0.5, 1);
  EXPECT_THROW(o.query(0, 2), ContractError);
}

TEST(Oracle, FractionOnKHundred) {
  const Graph host = complete_graph(100);
  EdgeOracle o(host, 0.3, 2024);
  std::size_t present = 0;
  host.for_each_edge([&](Vertex u, Vertex v) { present += o.query(u, v); });
  const double m = 4950.0;
  const double sigma = std::sqrt(0.3 * 0.7 / m);
  EXPECT_NEAR(static_cast<double>(present) / m, 0.3, 3 * sigma);
}

TEST(Oracle, AgreesWithPercolateRegardlessOfOrder) {
  const Graph host = random_regular_graph(80, 6, 3);
  const Graph direct = percolate(host, 0.35, 55);
  EdgeOracle forward(host, 0.35, 55);
  EdgeOracle backward(host, 0.35, 55);
  const auto edges = host.edges();
  for (const Edge& e : edges) forward.query(e.u, e.v);
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) backward.query(it->v, it->u);
  EXPECT_EQ(forward.present_graph(), direct);
  EXPECT_EQ(backward.present_graph(), direct);
}

TEST(Oracle, RemainderPercolation) {
  const Graph host = complete_graph(20);
  EdgeOracle all(host, 0.4, 8);
  host.for_each_edge([&](Vertex u, Vertex v) { all.query(u, v); });
  const Graph present = all.present_graph();
  EXPECT_EQ(all.remainder_percolation(), present);
  EXPECT_EQ(all.draws(), host.num_edges());

  EdgeOracle none(host, 0.0, 8);
  none.query(1, 2);
  EXPECT_EQ(none.remainder_percolation().num_edges(), 0u);

  EdgeOracle fresh(host, 1.0, 8);
  EXPECT_EQ(fresh.remainder_percolation(), host);

  EdgeOracle partial(host, 0.4, 8);
  for (Vertex v = 1; v < 20; ++v) partial.query(0, v);
  EXPECT_EQ(partial.remainder_percolation(), percolate(host, 0.4, 8));
}

TEST(Coupling, MarginalMatchesP) {
  const Graph host = complete_graph(50);
  const auto pp = PercolationParams::make(10, 0.5);
  constexpr int kTrials = 10000;
  double kept = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const Graph base = percolate(host, pp.p1, derive_seed(t, 1));
    kept += static_cast<double>(sprinkle(base, host, pp.p2, derive_seed(t, 2)).num_edges());
  }
  const double m = static_cast<double>(host.num_edges());
  const double fraction = kept / (m * kTrials);
  EXPECT_NEAR(fraction, pp.p, 3 * std::sqrt(pp.p * (1 - pp.p) / (m * kTrials)));
}

TEST(Random, EdgeUniformSymmetricAndInRange) {
  for (std::uint32_t u = 0; u < 50; ++u) {
    for (std::uint32_t v = u + 1; v < 50; ++v) {
      const double x = edge_uniform(5, u, v);
      EXPECT_EQ(x, edge_uniform(5, v, u));
      EXPECT_GE(x, 0.0);
      EXPECT_LT(x, 1.0);
    }
  }
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}
