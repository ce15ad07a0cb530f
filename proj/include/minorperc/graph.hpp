#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minorperc/error.hpp"

namespace minorperc {

using Vertex = std::uint32_t;

/// Sorted list of distinct vertex ids.
using VertexSet = std::vector<Vertex>;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  /// Returns the edge with u < v.
  constexpr Edge canonical() const noexcept { return u < v ? Edge{u, v} : Edge{v, u}; }

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on vertices 0..n-1, stored as CSR with
/// sorted neighbor lists.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Edgeless graph on n vertices.
  explicit Graph(std::size_t n) : offsets_(n + 1, 0) {}

  /// Builds a graph from an edge list. Endpoint order inside an edge is
  /// irrelevant. Throws ParameterError on self-loops, duplicate edges, or
  /// out-of-range endpoints, naming the offending edge index.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge e = edges[i];
      if (e.u >= n || e.v >= n) {
        throw ParameterError("edge " + std::to_string(i) + " (" + std::to_string(e.u) + "," +
                             std::to_string(e.v) + ") has an endpoint outside [0," +
                             std::to_string(n) + ")");
      }
      if (e.u == e.v) {
        throw ParameterError("edge " + std::to_string(i) + " is a self-loop at vertex " +
                             std::to_string(e.u));
      }
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adj_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
      g.adj_[fill[e.u]++] = e.v;
      g.adj_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto first = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (auto dup = std::adjacent_find(first, last); dup != last) {
        throw ParameterError("duplicate edge (" + std::to_string(std::min<std::size_t>(v, *dup)) +
                             "," + std::to_string(std::max<std::size_t>(v, *dup)) + ")");
      }
    }
    g.m_ = edges.size();
    return g;
  }

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return m_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }

  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex u, Vertex v) const noexcept {
    if (u >= num_vertices() || v >= num_vertices()) return false;
    if (degree(u) > degree(v)) std::swap(u, v);
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Position of v inside the CSR row of u, or npos. Used as a dense per-direction edge slot.
  std::size_t slot(Vertex u, Vertex v) const noexcept {
    const auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return npos;
    return offsets_[u] + static_cast<std::size_t>(it - nb.begin());
  }

  std::size_t row_begin(Vertex v) const noexcept { return offsets_[v]; }

  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (Vertex u = 0; u < num_vertices(); ++u) {
      for (Vertex v : neighbors(u)) {
        if (u < v) fn(u, v);
      }
    }
  }

  /// Canonical edge list: u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for_each_edge([&](Vertex u, Vertex v) { out.push_back({u, v}); });
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adj_;
  std::size_t m_ = 0;
};

inline std::size_t min_degree(const Graph& g) {
  if (g.num_vertices() == 0) throw ParameterError("min_degree of an empty graph");
  std::size_t best = g.degree(0);
  for (Vertex v = 1; v < g.num_vertices(); ++v) best = std::min(best, g.degree(v));
  return best;
}

inline std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) best = std::max(best, g.degree(v));
  return best;
}

/// Connected components, largest first; equal sizes ordered by smallest member.
inline std::vector<VertexSet> components(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> seen(n, false);
  std::vector<VertexSet> out;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    VertexSet comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (Vertex w : g.neighbors(u)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const VertexSet& a, const VertexSet& b) { return a.size() > b.size(); });
  return out;
}

/// Membership mask over [0, n).
inline std::vector<bool> membership(std::size_t n, std::span<const Vertex> set) {
  std::vector<bool> in(n, false);
  for (Vertex v : set) in.at(v) = true;
  return in;
}

/// Number of edges of g with both endpoints in `set`.
inline std::size_t edges_within(const Graph& g, std::span<const Vertex> set) {
  const auto in = membership(g.num_vertices(), set);
  std::size_t count = 0;
  for (Vertex u : set) {
    for (Vertex v : g.neighbors(u)) {
      if (u < v && in[v]) ++count;
    }
  }
  return count;
}

/// Induced subgraph with vertices relabelled 0..|set|-1 in the order of `set`.
struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_parent;  // local id -> parent id
};

inline Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> set) {
  constexpr Vertex kAbsent = static_cast<Vertex>(-1);
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < set.size(); ++i) local.at(set[i]) = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (Vertex w : g.neighbors(set[i])) {
      if (local[w] != kAbsent && local[w] > i) edges.push_back({static_cast<Vertex>(i), local[w]});
    }
  }
  return {Graph::from_edges(set.size(), edges), {set.begin(), set.end()}};
}

/// Spanning subgraph of g keeping the edges accepted by `keep(u, v)` (u < v).
template <class Pred>
Graph filter_edges(const Graph& g, Pred&& keep) {
  std::vector<Edge> kept;
  g.for_each_edge([&](Vertex u, Vertex v) {
    if (keep(u, v)) kept.push_back({u, v});
  });
  return Graph::from_edges(g.num_vertices(), kept);
}

/// Edge union of two graphs on the same vertex set.
inline Graph graph_union(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices()) {
    throw ParameterError("graph_union: vertex counts differ");
  }
  std::vector<Edge> edges = a.edges();
  b.for_each_edge([&](Vertex u, Vertex v) {
    if (!a.has_edge(u, v)) edges.push_back({u, v});
  });
  return Graph::from_edges(a.num_vertices(), edges);
}

}  // namespace minorperc
