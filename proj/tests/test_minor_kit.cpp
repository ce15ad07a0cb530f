#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "minorperc/dense_minor.hpp"
#include "minorperc/exact_minor.hpp"
#include "minorperc/generators.hpp"
#include "minorperc/minor.hpp"
#include "test_support.hpp"

using namespace minorperc;
using testing_support::brute_force_hadwiger;
using testing_support::gnp;

TEST(Verify, CliqueSingletons) {
  const MinorCertificate c{{{0}, {1}, {2}, {3}}};
  EXPECT_TRUE(verify_minor(complete_graph(4), c).ok);
}

TEST(Verify, CycleContraction) {
  const MinorCertificate c{{{0, 1}, {2}, {3, 4}}};
  EXPECT_TRUE(verify_minor(cycle_graph(5), c).ok);
}

TEST(Verify, MissingAdjacency) {
  const MinorCertificate c{{{0}, {3}}};
  const VerifyResult r = verify_minor(path_graph(4), c);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violation, Violation::kNotAdjacent);
  EXPECT_EQ(r.first, 0u);
  EXPECT_EQ(r.second, 1u);
}

TEST(Verify, ViolationOrder) {
  const Graph p = path_graph(5);
  // Overlap is reported before the disconnected set {0,2}.
  const VerifyResult overlap = verify_minor(p, MinorCertificate{{{0, 2}, {2, 3}}});
  EXPECT_EQ(overlap.violation, Violation::kOverlap);
  const VerifyResult disconnected = verify_minor(p, MinorCertificate{{{0, 2}, {4}}});
  EXPECT_EQ(disconnected.violation, Violation::kDisconnected);
  EXPECT_EQ(disconnected.first, 0u);
  const VerifyResult empty = verify_minor(p, MinorCertificate{{{0}, {}}});
  EXPECT_EQ(empty.violation, Violation::kEmptySet);
  EXPECT_THROW(verify_minor(p, MinorCertificate{{{0}, {9}}}), ParameterError);
  EXPECT_FALSE(empty.describe().empty());
}

TEST(Upper, Examples) {
  EXPECT_EQ(hadwiger_upper(5, 10), 5u);
  EXPECT_EQ(hadwiger_upper(4, 0), 1u);
  EXPECT_EQ(hadwiger_upper(10, 15), 6u);
  EXPECT_EQ(hadwiger_upper(3, 100), 3u);
  EXPECT_EQ(hadwiger_upper(0, 0), 0u);
  // Closed form floor((1 + sqrt(1 + 8m)) / 2).
  for (std::size_t m = 0; m < 3000; ++m) {
    const auto t = static_cast<std::size_t>(std::floor((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(m))) / 2.0));
    EXPECT_EQ(hadwiger_upper(100000, m), t) << m;
  }
}

TEST(Exact, Examples) {
  EXPECT_EQ(hadwiger_exact(complete_graph(5)), 5u);
  EXPECT_EQ(hadwiger_exact(Graph(4)), 1u);
  EXPECT_EQ(hadwiger_exact(Graph(0)), 0u);
  EXPECT_EQ(hadwiger_exact(cycle_graph(7)), 3u);
  EXPECT_EQ(hadwiger_exact(path_graph(6)), 2u);
  EXPECT_EQ(hadwiger_exact(complete_bipartite_graph(3, 3)), 4u);
}

TEST(Exact, CompleteGraphs) {
  for (std::size_t t = 1; t <= 8; ++t) EXPECT_EQ(hadwiger_exact(complete_graph(t)), t);
}

TEST(Exact, PetersenMatchesBruteForce) {
  const Graph p = petersen_graph();
  const std::size_t brute = brute_force_hadwiger(p);
  EXPECT_EQ(brute, 5u);
  EXPECT_EQ(hadwiger_exact(p), brute);
  const MinorCertificate c = hadwiger_exact_certificate(p);
  EXPECT_TRUE(verify_minor(p, c).ok);
  EXPECT_EQ(c.order(), 5u);
}

TEST(Exact, AgreesWithBruteForceOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const Graph g = gnp(n, 0.25 + 0.5 * static_cast<double>(seed % 3) / 2.0, seed);
    EXPECT_EQ(hadwiger_exact(g), brute_force_hadwiger(g)) << "seed " << seed;
  }
}

TEST(Exact, RefusesAboveCap) {
  try {
    hadwiger_exact(complete_graph(13));
    FAIL() << "expected refusal";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
  EXPECT_EQ(hadwiger_exact(complete_graph(13), 13), 13u);
}

TEST(Exact, MonotoneUnderEdgeAddition) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + rng() % 7;
    const Graph g = gnp(n, 0.3, rng());
    std::vector<Edge> missing;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) missing.push_back({u, v});
      }
    }
    if (missing.empty()) continue;
    auto edges = g.edges();
    edges.push_back(missing[rng() % missing.size()]);
    const Graph h = Graph::from_edges(n, edges);
    EXPECT_LE(hadwiger_exact(g), hadwiger_exact(h));
  }
}

TEST(DenseMinor, Examples) {
  const MinorCertificate k10 = dense_minor(complete_graph(10), 1);
  EXPECT_EQ(k10.order(), 10u);
  EXPECT_TRUE(verify_minor(complete_graph(10), k10).ok);
  const MinorCertificate empty = dense_minor(Graph(6), 1);
  EXPECT_EQ(empty.order(), 1u);
  const Graph g = gnp(60, 0.5, 2024);
  const MinorCertificate c = dense_minor(g, 7);
  EXPECT_TRUE(verify_minor(g, c).ok);
  EXPECT_GE(c.order(), 6u);
  EXPECT_THROW(dense_minor(Graph(0), 1), ParameterError);
}

TEST(DenseMinor, BoundedByExactOnSmallGraphs) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 1 + seed % 10;
    const Graph g = gnp(n, 0.15 + 0.1 * static_cast<double>(seed % 7), seed * 7 + 1);
    const MinorCertificate c = dense_minor(g, seed);
    ASSERT_TRUE(verify_minor(g, c).ok);
    const std::size_t exact = hadwiger_exact(g);
    EXPECT_GE(c.order(), 1u);
    EXPECT_LE(c.order(), exact);
    EXPECT_LE(exact, hadwiger_upper(g));
  }
}

TEST(DenseMinor, AlwaysVerifies) {
  std::mt19937_64 rng(99);
  for (int run = 0; run < 1000; ++run) {
    const std::size_t n = 1 + rng() % 80;
    const double p = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    const Graph g = gnp(n, p, rng());
    const MinorCertificate c = dense_minor(g, rng());
    ASSERT_TRUE(verify_minor(g, c).ok) << "run " << run;
    ASSERT_LE(c.order(), hadwiger_upper(g));
  }
}

TEST(DenseMinor, DeterministicPerSeed) {
  const Graph g = gnp(50, 0.3, 5);
  EXPECT_EQ(dense_minor(g, 3), dense_minor(g, 3));
}

TEST(DenseMinor, ReductionKeepsMinors) {
  // Subdividing every edge of K5 keeps a K5 minor; reduction suppresses the
  // degree-2 vertices and the exact solver then finds it.
  std::vector<Edge> edges;
  Vertex next = 5;
  for (Vertex u = 0; u < 5; ++u) {
    for (Vertex v = u + 1; v < 5; ++v) {
      edges.push_back({u, next});
      edges.push_back({next, v});
      ++next;
    }
  }
  const Graph g = Graph::from_edges(next, edges);
  const MinorCertificate c = dense_minor(g, 1);
  EXPECT_TRUE(verify_minor(g, c).ok);
  EXPECT_EQ(c.order(), 5u);
}

TEST(Certificate, FileRoundTrip) {
  MinorCertificate c{{{3, 1}, {0}, {2, 4}}};
  c.normalize();
  std::stringstream buf;
  write_certificate(buf, c);
  EXPECT_EQ(buf.str(), "3\n0\n1 3\n2 4\n");
  EXPECT_EQ(read_certificate(buf), c);
}

TEST(Certificate, ParseErrors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::stringstream in(text);
    try {
      read_certificate(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of(""), 1u);
  EXPECT_EQ(line_of("x\n"), 1u);
  EXPECT_EQ(line_of("2\n0 1\n"), 3u);
  EXPECT_EQ(line_of("1\n0 0\n"), 2u);
  EXPECT_EQ(line_of("1\n0 a\n"), 2u);
  EXPECT_EQ(line_of("1\n0\n5\n"), 3u);
}

TEST(Certificate, LiftAndTrivial) {
  const MinorCertificate quotient{{{0}, {1}}};
  const std::vector<VertexSet> groups{{4, 5}, {1, 2}};
  const MinorCertificate lifted = lift_certificate(quotient, groups);
  EXPECT_EQ(lifted.branch_sets[0], (VertexSet{4, 5}));
  EXPECT_EQ(lifted.branch_sets[1], (VertexSet{1, 2}));
  EXPECT_EQ(trivial_certificate(Graph(3)).order(), 1u);
  EXPECT_EQ(trivial_certificate(path_graph(3)).order(), 2u);
  EXPECT_TRUE(verify_minor(path_graph(3), trivial_certificate(path_graph(3))).ok);
}
