#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/graph_io.hpp"

namespace minorperc {

enum class Family { kComplete, kCompleteBipartite, kRandomRegular, kHypercube, kCliqueUnion, kFile };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::kComplete: return "complete";
    case Family::kCompleteBipartite: return "complete-bipartite";
    case Family::kRandomRegular: return "random-regular";
    case Family::kHypercube: return "hypercube";
    case Family::kCliqueUnion: return "clique-union";
    case Family::kFile: return "file";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::kComplete, Family::kCompleteBipartite, Family::kRandomRegular,
                   Family::kHypercube, Family::kCliqueUnion, Family::kFile}) {
    if (to_string(f) == name) return f;
  }
  throw ParameterError("unknown graph family '" + std::string(name) + "'");
}

/// Which size fields matter depends on the family:
///   complete            n
///   complete-bipartite  a, b
///   random-regular      n, k
///   hypercube           d
///   clique-union        copies, k   (disjoint copies of K_{k+1})
///   file                path
struct GeneratorSpec {
  Family family = Family::kComplete;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t d = 0;
  std::size_t copies = 0;
  std::string path;
  std::uint64_t seed = 0;
};

struct GeneratedGraph {
  Graph graph;
  std::size_t min_degree = 0;
  std::size_t promised_min_degree = 0;
  /// Rejected stub pairings (random-regular only).
  std::size_t rejections = 0;
};

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph::from_edges(n, edges);
}

inline Graph complete_bipartite_graph(std::size_t a, std::size_t b) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < a; ++u) {
    for (std::size_t j = 0; j < b; ++j) edges.push_back({u, static_cast<Vertex>(a + j)});
  }
  return Graph::from_edges(a + b, edges);
}

inline Graph hypercube_graph(std::size_t d) {
  if (d >= 28) throw ParameterError("hypercube dimension too large");
  const std::size_t n = std::size_t{1} << d;
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (std::size_t bit = 0; bit < d; ++bit) {
      const Vertex v = u ^ (Vertex{1} << bit);
      if (u < v) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, edges);
}

/// `copies` disjoint copies of K_{k+1}; copy c occupies ids [c(k+1), (c+1)(k+1)).
inline Graph clique_union_graph(std::size_t copies, std::size_t k) {
  const std::size_t s = k + 1;
  std::vector<Edge> edges;
  edges.reserve(copies * s * k / 2);
  for (std::size_t c = 0; c < copies; ++c) {
    const auto base = static_cast<Vertex>(c * s);
    for (Vertex i = 0; i < s; ++i) {
      for (Vertex j = i + 1; j < s; ++j) edges.push_back({base + i, base + j});
    }
  }
  return Graph::from_edges(copies * s, edges);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, static_cast<Vertex>((i + 1) % n)});
  return Graph::from_edges(n, edges);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph::from_edges(n, edges);
}

inline Graph petersen_graph() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.push_back({i, static_cast<Vertex>((i + 1) % 5)});      // outer cycle
    edges.push_back({i, i + 5});                                 // spokes
    edges.push_back({i + 5, static_cast<Vertex>((i + 2) % 5 + 5)});  // inner pentagram
  }
  return Graph::from_edges(10, edges);
}

/// Random k-regular graph from the pairing model. Stub pairs that would
/// create a loop or a multi-edge are rejected and redrawn; if the remaining
/// stubs cannot be paired the whole pairing restarts. `rejections` counts both.
inline Graph random_regular_graph(std::size_t n, std::size_t k, std::uint64_t seed,
                                  std::size_t* rejections = nullptr) {
  if (n == 0 || k >= n) throw ParameterError("random-regular requires 0 <= k < n");
  if ((n * k) % 2 != 0) throw ParameterError("random-regular requires n*k even");
  std::mt19937_64 rng(seed);
  std::size_t rejected = 0;
  constexpr int kMaxRestarts = 10000;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::vector<Vertex> stubs;
    stubs.reserve(n * k);
    for (Vertex v = 0; v < n; ++v) stubs.insert(stubs.end(), k, v);
    std::unordered_set<std::uint64_t> present;
    present.reserve(n * k);
    std::vector<Edge> edges;
    edges.reserve(n * k / 2);
    bool stuck = false;
    while (!stubs.empty()) {
      std::size_t misses = 0;
      for (;;) {
        std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
        std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        Vertex u = stubs[i];
        Vertex v = stubs[j];
        if (u > v) std::swap(u, v);
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
        if (i != j && u != v && !present.contains(key)) {
          present.insert(key);
          edges.push_back({u, v});
          if (i < j) std::swap(i, j);
          stubs[i] = stubs.back();
          stubs.pop_back();
          stubs[j] = stubs.back();
          stubs.pop_back();
          break;
        }
        ++rejected;
        if (++misses > 50 * stubs.size() + 100) {
          stuck = true;
          break;
        }
      }
      if (stuck) break;
    }
    if (!stuck) {
      if (rejections != nullptr) *rejections = rejected;
      return Graph::from_edges(n, edges);
    }
  }
  throw ParameterError("random-regular pairing did not converge");
}

inline GeneratedGraph generate(const GeneratorSpec& spec) {
  GeneratedGraph out;
  auto require_positive = [](std::size_t value, const char* name) {
    if (value == 0) throw ParameterError(std::string("generator parameter '") + name + "' must be positive");
  };
  switch (spec.family) {
    case Family::kComplete:
      require_positive(spec.n, "n");
      out.graph = complete_graph(spec.n);
      out.promised_min_degree = spec.n - 1;
      break;
    case Family::kCompleteBipartite:
      require_positive(spec.a, "a");
      require_positive(spec.b, "b");
      out.graph = complete_bipartite_graph(spec.a, spec.b);
      out.promised_min_degree = std::min(spec.a, spec.b);
      break;
    case Family::kRandomRegular:
      require_positive(spec.n, "n");
      require_positive(spec.k, "k");
      out.graph = random_regular_graph(spec.n, spec.k, spec.seed, &out.rejections);
      out.promised_min_degree = spec.k;
      break;
    case Family::kHypercube:
      require_positive(spec.d, "d");
      out.graph = hypercube_graph(spec.d);
      out.promised_min_degree = spec.d;
      break;
    case Family::kCliqueUnion:
      require_positive(spec.copies, "copies");
      require_positive(spec.k, "k");
      out.graph = clique_union_graph(spec.copies, spec.k);
      out.promised_min_degree = spec.k;
      break;
    case Family::kFile:
      out.graph = load_edge_list(spec.path);
      out.promised_min_degree = 0;
      break;
  }
  out.min_degree = out.graph.num_vertices() > 0 ? min_degree(out.graph) : 0;
  if (out.min_degree < out.promised_min_degree) {
    throw ContractError("generated graph misses its promised minimum degree");
  }
  return out;
}

}  // namespace minorperc
