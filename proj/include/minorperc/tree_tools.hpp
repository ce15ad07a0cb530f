#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"

namespace minorperc {

/// floor(sqrt(k)), exact for all 64-bit k.
inline std::size_t isqrt(std::size_t k) {
  auto s = static_cast<std::size_t>(std::sqrt(static_cast<double>(k)));
  while (s * s > k) --s;
  while ((s + 1) * (s + 1) <= k) ++s;
  return s;
}

/// Rooted tree over arbitrary (global) vertex ids. Internally vertices are
/// indexed 0..size-1; `vertex(i)` maps back to the global id.
class RootedTree {
 public:
  /// Builds the tree spanned by `edges` over `vertices`, rooted at `root`.
  /// Throws ParameterError unless the edges form a spanning tree of `vertices`.
  static RootedTree from_edges(std::span<const Vertex> vertices, std::span<const Edge> edges, Vertex root) {
    RootedTree t;
    t.ids_.assign(vertices.begin(), vertices.end());
    const std::size_t n = t.ids_.size();
    if (n == 0) throw ParameterError("rooted tree needs at least one vertex");
    std::unordered_map<Vertex, std::size_t> local;
    local.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!local.emplace(t.ids_[i], i).second) throw ParameterError("tree vertex listed twice");
    }
    if (edges.size() + 1 != n) throw ParameterError("a tree on n vertices needs n-1 edges");
    std::vector<std::vector<std::size_t>> adj(n);
    for (const Edge& e : edges) {
      auto iu = local.find(e.u);
      auto iv = local.find(e.v);
      if (iu == local.end() || iv == local.end()) throw ParameterError("tree edge leaves the vertex set");
      adj[iu->second].push_back(iv->second);
      adj[iv->second].push_back(iu->second);
    }
    auto ir = local.find(root);
    if (ir == local.end()) throw ParameterError("root is not a tree vertex");
    t.root_ = ir->second;
    t.parent_.assign(n, kNone);
    t.depth_.assign(n, 0);
    t.children_.assign(n, {});
    t.order_.clear();
    t.order_.reserve(n);
    t.parent_[t.root_] = t.root_;
    t.order_.push_back(t.root_);
    for (std::size_t head = 0; head < t.order_.size(); ++head) {
      const std::size_t u = t.order_[head];
      for (std::size_t w : adj[u]) {
        if (t.parent_[w] != kNone) continue;
        t.parent_[w] = u;
        t.depth_[w] = t.depth_[u] + 1;
        t.children_[u].push_back(w);
        t.order_.push_back(w);
      }
    }
    if (t.order_.size() != n) throw ParameterError("tree edges do not connect all vertices");
    for (auto& ch : t.children_) {
      std::sort(ch.begin(), ch.end(), [&](std::size_t a, std::size_t b) { return t.ids_[a] < t.ids_[b]; });
    }
    t.size_.assign(n, 1);
    for (std::size_t i = n; i-- > 1;) {
      const std::size_t u = t.order_[i];
      t.size_[t.parent_[u]] += t.size_[u];
    }
    return t;
  }

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t root() const noexcept { return root_; }
  Vertex vertex(std::size_t i) const { return ids_[i]; }
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }
  std::size_t subtree_size(std::size_t i) const { return size_[i]; }
  std::size_t depth(std::size_t i) const { return depth_[i]; }
  /// BFS order from the root.
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  std::size_t degree(std::size_t i) const { return children_[i].size() + (i == root_ ? 0 : 1); }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < size(); ++i) best = std::max(best, degree(i));
    return best;
  }

  /// Local index of global id v, or size() if absent.
  std::size_t index_of(Vertex v) const {
    auto it = std::find(ids_.begin(), ids_.end(), v);
    return static_cast<std::size_t>(it - ids_.begin());
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<Vertex> ids_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> order_;
  std::size_t root_ = 0;
};

/// Returns the deepest vertex whose subtree has at least `ell` vertices (ties
/// by smallest id). Its children all have subtrees smaller than ell, so
/// ell <= |T_v| <= 1 + Delta*(ell-1) <= ell*Delta.
inline Vertex subtree_split(const RootedTree& t, std::size_t ell) {
  if (ell < 1 || ell > t.size()) throw ParameterError("subtree_split requires 1 <= ell <= |T|");
  std::size_t best = t.root();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.subtree_size(i) < ell) continue;
    if (t.depth(i) > t.depth(best) || (t.depth(i) == t.depth(best) && t.vertex(i) < t.vertex(best))) {
      best = i;
    }
  }
  return t.vertex(best);
}

struct PiecePartition {
  std::vector<VertexSet> pieces;
  /// Components too small to form a piece on their own (forest_partition only).
  std::vector<VertexSet> undersized;
};

/// Partitions a tree with maximum degree <= max_deg into connected pieces of
/// size in [s, (max_deg+1)s], s = floor(sqrt(k)).
///
/// Pieces are cut by repeatedly removing the subtree_split witness for
/// ell = s; a final residue smaller than s is merged into the last piece cut,
/// which touches it through the cut vertex's parent edge. The cut set does not
/// depend on the order of removal, so it is computed in one post-order pass;
/// the removal order (deepest first, then smallest id) only decides which
/// piece absorbs the residue.
inline PiecePartition tree_partition(const RootedTree& t, std::size_t k, std::size_t max_deg) {
  if (k == 0) throw ParameterError("tree_partition requires k >= 1");
  const std::size_t s = isqrt(k);
  if (t.max_degree() > max_deg) {
    throw ParameterError("tree_partition: tree degree " + std::to_string(t.max_degree()) +
                         " exceeds the declared bound " + std::to_string(max_deg));
  }
  if (t.size() <= s) {
    throw ParameterError("tree_partition: tree has at most floor(sqrt(k)) vertices; treat it as a single "
                         "undersized piece");
  }
  const std::size_t n = t.size();
  std::vector<std::size_t> residual(n, 1);
  std::vector<bool> cut(n, false);
  const auto& order = t.order();
  for (std::size_t idx = n; idx-- > 0;) {
    const std::size_t u = order[idx];
    for (std::size_t c : t.children(u)) {
      if (!cut[c]) residual[u] += residual[c];
    }
    if (residual[u] >= s) cut[u] = true;
  }

  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < n; ++i) {
    if (cut[i]) cuts.push_back(i);
  }
  std::sort(cuts.begin(), cuts.end(), [&](std::size_t a, std::size_t b) {
    if (t.depth(a) != t.depth(b)) return t.depth(a) > t.depth(b);
    return t.vertex(a) < t.vertex(b);
  });

  // Assign each vertex to its nearest cut ancestor-or-self (top-down).
  constexpr std::size_t kResidue = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kResidue);
  for (std::size_t u : order) {
    if (cut[u]) {
      owner[u] = u;
    } else if (u != t.root()) {
      owner[u] = owner[t.parent(u)];
    }
  }
  std::vector<std::size_t> piece_of(n, 0);
  for (std::size_t p = 0; p < cuts.size(); ++p) piece_of[cuts[p]] = p;

  PiecePartition out;
  out.pieces.resize(cuts.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = owner[i] == kResidue ? cuts.size() - 1 : piece_of[owner[i]];
    out.pieces[p].push_back(t.vertex(i));
  }
  for (auto& piece : out.pieces) std::sort(piece.begin(), piece.end());
  return out;
}

/// Applies tree_partition to every component of a forest. Components with
/// fewer than floor(sqrt(k)) vertices are reported as undersized; a component
/// of exactly that size is one piece.
inline PiecePartition forest_partition(std::span<const Vertex> vertices, std::span<const Edge> forest_edges,
                                       std::size_t k, std::size_t max_deg) {
  if (k == 0) throw ParameterError("forest_partition requires k >= 1");
  const std::size_t s = isqrt(k);
  std::unordered_map<Vertex, std::size_t> local;
  for (std::size_t i = 0; i < vertices.size(); ++i) local.emplace(vertices[i], i);
  std::vector<Edge> local_edges;
  local_edges.reserve(forest_edges.size());
  for (const Edge& e : forest_edges) {
    auto iu = local.find(e.u);
    auto iv = local.find(e.v);
    if (iu == local.end() || iv == local.end()) throw ParameterError("forest edge leaves the vertex set");
    local_edges.push_back({static_cast<Vertex>(iu->second), static_cast<Vertex>(iv->second)});
  }
  const Graph f = Graph::from_edges(vertices.size(), local_edges);

  std::vector<VertexSet> comps = components(f);
  std::vector<std::size_t> comp_of(vertices.size(), 0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (Vertex v : comps[c]) comp_of[v] = c;
  }
  std::vector<std::vector<Edge>> comp_edges(comps.size());
  for (std::size_t i = 0; i < local_edges.size(); ++i) {
    comp_edges[comp_of[local_edges[i].u]].push_back(forest_edges[i]);
  }
  std::vector<std::size_t> visit(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (auto& v : comps[c]) v = vertices[v];
    std::sort(comps[c].begin(), comps[c].end());
    visit[c] = c;
  }
  // Process components in order of their smallest global id.
  std::sort(visit.begin(), visit.end(),
            [&](std::size_t a, std::size_t b) { return comps[a].front() < comps[b].front(); });

  PiecePartition out;
  for (std::size_t c : visit) {
    const VertexSet& comp = comps[c];
    if (comp.size() < s) {
      out.undersized.push_back(comp);
      continue;
    }
    if (comp.size() == s) {
      out.pieces.push_back(comp);
      continue;
    }
    const RootedTree t = RootedTree::from_edges(comp, comp_edges[c], comp.front());
    PiecePartition part = tree_partition(t, k, max_deg);
    for (auto& p : part.pieces) out.pieces.push_back(std::move(p));
  }
  return out;
}

}  // namespace minorperc
