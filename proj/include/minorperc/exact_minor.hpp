#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/minor.hpp"

namespace minorperc {

namespace detail {

using Mask = std::uint32_t;

inline bool mask_connected(Mask set, const std::vector<Mask>& adj) {
  if (set == 0) return false;
  Mask reached = set & (~set + 1);
  Mask frontier = reached;
  while (frontier != 0) {
    Mask next = 0;
    for (Mask f = frontier; f != 0; f &= f - 1) next |= adj[std::countr_zero(f)];
    next &= set & ~reached;
    reached |= next;
    frontier = next;
  }
  return reached == set;
}

inline Mask mask_neighbors(Mask set, const std::vector<Mask>& adj) {
  Mask out = 0;
  for (Mask s = set; s != 0; s &= s - 1) out |= adj[std::countr_zero(s)];
  return out & ~set;
}

// Exhaustive search over partitions of a connected graph (restricted growth
// strings). For a connected graph some optimal K_t certificate covers every
// vertex: an unused vertex next to a branch set can always be absorbed.
class PartitionSearch {
 public:
  PartitionSearch(std::vector<Mask> adj, std::size_t upper) : adj_(std::move(adj)), upper_(upper) {
    n_ = adj_.size();
    parts_.assign(n_, 0);
  }

  std::vector<Mask> run() {
    best_ = 0;
    best_parts_.clear();
    done_ = false;
    recurse(0, 0);
    return best_parts_;
  }

 private:
  void recurse(std::size_t i, std::size_t used) {
    if (done_ || used + (n_ - i) <= best_) return;
    if (i == n_) {
      for (std::size_t a = 0; a < used; ++a) {
        if (!mask_connected(parts_[a], adj_)) return;
      }
      for (std::size_t a = 0; a < used; ++a) {
        const Mask na = mask_neighbors(parts_[a], adj_);
        for (std::size_t b = a + 1; b < used; ++b) {
          if ((na & parts_[b]) == 0) return;
        }
      }
      best_ = used;
      best_parts_.assign(parts_.begin(), parts_.begin() + static_cast<std::ptrdiff_t>(used));
      if (best_ >= upper_) done_ = true;
      return;
    }
    const Mask all = (Mask{1} << n_) - 1;
    const Mask remaining = all & ~((Mask{1} << (i + 1)) - 1);
    const Mask bit = Mask{1} << i;
    // A fresh label first: large partitions are found early, which tightens pruning.
    parts_[used] = bit;
    if (viable(used + 1, remaining)) recurse(i + 1, used + 1);
    parts_[used] = 0;
    for (std::size_t a = 0; a < used && !done_; ++a) {
      parts_[a] |= bit;
      if (viable(used, remaining)) recurse(i + 1, used);
      parts_[a] &= ~bit;
    }
  }

  // A part that is disconnected and cannot grow, or a non-adjacent pair
  // neither of which can grow, can never be repaired by later vertices.
  bool viable(std::size_t used, Mask remaining) const {
    for (std::size_t a = 0; a < used; ++a) {
      const Mask na = mask_neighbors(parts_[a], adj_);
      const bool grows = (na & remaining) != 0;
      if (!grows && !mask_connected(parts_[a], adj_)) return false;
      if (grows) continue;
      for (std::size_t b = a + 1; b < used; ++b) {
        if ((na & parts_[b]) == 0 && (mask_neighbors(parts_[b], adj_) & remaining) == 0) return false;
      }
    }
    return true;
  }

  std::vector<Mask> adj_;
  std::size_t upper_;
  std::size_t n_ = 0;
  std::vector<Mask> parts_;
  std::vector<Mask> best_parts_;
  std::size_t best_ = 0;
  bool done_ = false;
};

/// Exact maximum clique-minor certificate of g, by component. No size check.
inline MinorCertificate exact_certificate_unchecked(const Graph& g) {
  MinorCertificate best;
  for (const VertexSet& comp : components(g)) {
    const std::size_t c = comp.size();
    if (c <= best.order()) continue;
    if (c > 31) throw ParameterError("exact minor search: component too large");
    const Subgraph sub = induced_subgraph(g, comp);
    if (hadwiger_upper(sub.graph) <= best.order()) continue;
    std::vector<Mask> adj(c, 0);
    sub.graph.for_each_edge([&](Vertex u, Vertex v) {
      adj[u] |= Mask{1} << v;
      adj[v] |= Mask{1} << u;
    });
    PartitionSearch search(adj, hadwiger_upper(sub.graph));
    const std::vector<Mask> parts = search.run();
    if (parts.size() <= best.order()) continue;
    best.branch_sets.clear();
    for (Mask part : parts) {
      VertexSet set;
      for (Mask s = part; s != 0; s &= s - 1) set.push_back(sub.to_parent[std::countr_zero(s)]);
      std::sort(set.begin(), set.end());
      best.branch_sets.push_back(std::move(set));
    }
  }
  best.normalize();
  return best;
}

}  // namespace detail

inline constexpr std::size_t kExactVertexCap = 12;

/// Exact Hadwiger number with a witnessing certificate. Refuses graphs with
/// more than `cap` vertices (cap itself is limited to 31).
inline MinorCertificate hadwiger_exact_certificate(const Graph& g, std::size_t cap = kExactVertexCap) {
  if (cap > 31) throw ParameterError("hadwiger_exact: cap cannot exceed 31");
  if (g.num_vertices() > cap) {
    throw ParameterError("hadwiger_exact: graph has " + std::to_string(g.num_vertices()) +
                         " vertices, above the cap of " + std::to_string(cap));
  }
  return detail::exact_certificate_unchecked(g);
}

inline std::size_t hadwiger_exact(const Graph& g, std::size_t cap = kExactVertexCap) {
  return hadwiger_exact_certificate(g, cap).order();
}

}  // namespace minorperc
