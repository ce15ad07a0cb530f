#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "minorperc/generators.hpp"
#include "minorperc/graph.hpp"

namespace testing_support {

using namespace minorperc;

inline Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, edges);
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// Small graphs (n <= 9): named families plus seeded G(n,p) samples.
inline std::vector<NamedGraph> small_zoo() {
  std::vector<NamedGraph> zoo;
  for (std::size_t n = 1; n <= 9; ++n) {
    zoo.push_back({"K" + std::to_string(n), complete_graph(n)});
    zoo.push_back({"P" + std::to_string(n), path_graph(n)});
    zoo.push_back({"E" + std::to_string(n), Graph(n)});
    if (n >= 3) zoo.push_back({"C" + std::to_string(n), cycle_graph(n)});
  }
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t b = a; a + b <= 9; ++b) {
      zoo.push_back({"K" + std::to_string(a) + "," + std::to_string(b), complete_bipartite_graph(a, b)});
    }
  }
  zoo.push_back({"Q1", hypercube_graph(1)});
  zoo.push_back({"Q2", hypercube_graph(2)});
  zoo.push_back({"Q3", hypercube_graph(3)});
  zoo.push_back({"2xK3", clique_union_graph(2, 2)});
  zoo.push_back({"3xK3", clique_union_graph(3, 2)});
  zoo.push_back({"2xK4", clique_union_graph(2, 3)});
  zoo.push_back({"rr(8,3)", random_regular_graph(8, 3, 1)});
  zoo.push_back({"rr(8,5)", random_regular_graph(8, 5, 2)});
  std::uint64_t seed = 1000;
  for (std::size_t n = 2; n <= 9; ++n) {
    for (double p : {0.2, 0.35, 0.5, 0.65, 0.8}) {
      for (int rep = 0; rep < 4; ++rep) {
        zoo.push_back({"gnp(" + std::to_string(n) + "," + std::to_string(p) + ")#" + std::to_string(rep),
                       gnp(n, p, ++seed)});
      }
    }
  }
  return zoo;
}

/// Hadwiger number by a deliberately naive route: enumerate every set
/// partition of each component (restricted growth strings), keep those whose
/// blocks are all connected, and take the largest block count whose quotient
/// is complete. Correct because in a connected graph any K_t minor extends to
/// a partition of all vertices into t connected, pairwise adjacent blocks.
inline std::size_t brute_force_hadwiger(const Graph& g) {
  if (g.num_vertices() == 0) return 0;
  std::size_t best = 0;
  for (const VertexSet& comp : components(g)) {
    const Subgraph sub = induced_subgraph(g, comp);
    const Graph& h = sub.graph;
    const std::size_t n = h.num_vertices();
    std::vector<std::size_t> label(n, 0);
    auto evaluate = [&](std::size_t blocks) {
      for (std::size_t b = 0; b < blocks; ++b) {
        std::vector<Vertex> members;
        for (Vertex v = 0; v < n; ++v) {
          if (label[v] == b) members.push_back(v);
        }
        std::vector<bool> seen(n, false);
        std::vector<Vertex> stack{members.front()};
        seen[members.front()] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
          const Vertex u = stack.back();
          stack.pop_back();
          for (Vertex w : h.neighbors(u)) {
            if (label[w] == b && !seen[w]) {
              seen[w] = true;
              ++reached;
              stack.push_back(w);
            }
          }
        }
        if (reached != members.size()) return false;
      }
      std::vector<bool> adj(blocks * blocks, false);
      h.for_each_edge([&](Vertex u, Vertex v) {
        adj[label[u] * blocks + label[v]] = true;
        adj[label[v] * blocks + label[u]] = true;
      });
      for (std::size_t a = 0; a < blocks; ++a) {
        for (std::size_t b = a + 1; b < blocks; ++b) {
          if (!adj[a * blocks + b]) return false;
        }
      }
      return true;
    };
    // Iterate restricted growth strings: label[0] = 0, label[i] <= max(label[<i]) + 1.
    while (true) {
      std::size_t blocks = 0;
      for (std::size_t l : label) blocks = std::max(blocks, l + 1);
      if (blocks > best && evaluate(blocks)) best = blocks;
      std::size_t i = n;
      while (i-- > 1) {
        std::size_t prefix_max = 0;
        for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, label[j]);
        if (label[i] <= prefix_max) {
          ++label[i];
          std::fill(label.begin() + static_cast<std::ptrdiff_t>(i) + 1, label.end(), 0);
          break;
        }
      }
      if (i == 0 || n == 1) break;
    }
  }
  return best;
}

}  // namespace testing_support
