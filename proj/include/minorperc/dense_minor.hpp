#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/exact_minor.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/minor.hpp"
#include "minorperc/random.hpp"

namespace minorperc {

struct DenseMinorOptions {
  /// Seeded-growth attempts per component, across all targets.
  std::size_t retry_budget = 24;
  std::size_t contraction_restarts = 4;
  /// Components of the reduced graph up to this size are solved exactly.
  std::size_t exact_cap = 10;
};

namespace detail {

/// Graph after deleting vertices of degree <= 1 and suppressing degree-2
/// vertices whose neighbors are non-adjacent. groups[v] lists the original
/// vertices contracted into reduced vertex v; every group is connected and
/// reduced adjacency implies adjacency of the groups in the original graph.
struct Reduced {
  Graph graph;
  std::vector<VertexSet> groups;
};

inline Reduced reduce_low_degree(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::set<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v) adj[v].insert(g.neighbors(v).begin(), g.neighbors(v).end());
  std::vector<VertexSet> groups(n);
  for (Vertex v = 0; v < n; ++v) groups[v] = {v};
  std::vector<bool> alive(n, true);
  std::vector<Vertex> queue(n);
  for (Vertex v = 0; v < n; ++v) queue[v] = static_cast<Vertex>(n - 1 - v);
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    if (adj[v].size() <= 1) {
      alive[v] = false;
      for (Vertex w : adj[v]) {
        adj[w].erase(v);
        queue.push_back(w);
      }
      adj[v].clear();
    } else if (adj[v].size() == 2) {
      const Vertex a = *adj[v].begin();
      const Vertex b = *std::next(adj[v].begin());
      if (adj[a].contains(b)) continue;
      alive[v] = false;
      groups[a].insert(groups[a].end(), groups[v].begin(), groups[v].end());
      adj[a].erase(v);
      adj[b].erase(v);
      adj[a].insert(b);
      adj[b].insert(a);
      adj[v].clear();
    }
  }
  std::vector<Vertex> id(n, 0);
  Reduced out;
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    id[v] = next++;
    std::sort(groups[v].begin(), groups[v].end());
    out.groups.push_back(std::move(groups[v]));
  }
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    for (Vertex w : adj[v]) {
      if (v < w) edges.push_back({id[v], id[w]});
    }
  }
  out.graph = Graph::from_edges(next, edges);
  return out;
}

/// Greedy contraction: repeatedly contract a minimum-degree vertex into the
/// neighbor sharing the fewest common neighbors until the quotient is
/// complete. Ties are broken by `rng`.
inline MinorCertificate contraction_minor(const Graph& g, std::mt19937_64& rng) {
  const std::size_t n = g.num_vertices();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>(words, 0));
  auto set_bit = [&](Vertex u, Vertex v) { adj[u][v / 64] |= std::uint64_t{1} << (v % 64); };
  auto clear_bit = [&](Vertex u, Vertex v) { adj[u][v / 64] &= ~(std::uint64_t{1} << (v % 64)); };
  auto test_bit = [&](Vertex u, Vertex v) { return (adj[u][v / 64] >> (v % 64)) & 1U; };
  std::vector<std::size_t> deg(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) set_bit(v, w);
    deg[v] = g.degree(v);
  }
  std::vector<VertexSet> groups(n);
  for (Vertex v = 0; v < n; ++v) groups[v] = {v};
  std::vector<bool> alive(n, true);
  std::size_t live = n;
  std::size_t edges = g.num_edges();
  std::uniform_int_distribution<std::uint64_t> coin;

  auto neighbors_of = [&](Vertex x) {
    std::vector<Vertex> out;
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t bits = adj[x][w]; bits != 0; bits &= bits - 1) {
        out.push_back(static_cast<Vertex>(w * 64 + std::countr_zero(bits)));
      }
    }
    return out;
  };

  while (live > 1 && edges != live * (live - 1) / 2) {
    Vertex x = 0;
    std::size_t best_deg = static_cast<std::size_t>(-1);
    std::uint64_t best_tie = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      const std::uint64_t tie = coin(rng);
      if (deg[v] < best_deg || (deg[v] == best_deg && tie < best_tie)) {
        x = v;
        best_deg = deg[v];
        best_tie = tie;
      }
    }
    const std::vector<Vertex> nx = neighbors_of(x);
    if (nx.empty()) {
      alive[x] = false;
      --live;
      continue;
    }
    Vertex y = nx.front();
    std::size_t best_common = static_cast<std::size_t>(-1);
    best_tie = 0;
    for (Vertex z : nx) {
      std::size_t common = 0;
      for (std::size_t w = 0; w < words; ++w) common += std::popcount(adj[x][w] & adj[z][w]);
      const std::uint64_t tie = coin(rng);
      if (common < best_common || (common == best_common && tie < best_tie)) {
        y = z;
        best_common = common;
        best_tie = tie;
      }
    }
    // Contract x into y.
    for (Vertex z : nx) {
      clear_bit(z, x);
      --deg[z];
      --edges;
      if (z == y) continue;
      if (!test_bit(y, z)) {
        set_bit(y, z);
        set_bit(z, y);
        ++deg[y];
        ++deg[z];
        ++edges;
      }
    }
    std::fill(adj[x].begin(), adj[x].end(), 0);
    deg[x] = 0;
    alive[x] = false;
    --live;
    groups[y].insert(groups[y].end(), groups[x].begin(), groups[x].end());
  }
  MinorCertificate c;
  for (Vertex v = 0; v < n; ++v) {
    if (alive[v]) c.branch_sets.push_back(groups[v]);
  }
  c.normalize();
  return c;
}

/// Seeds `target` branch sets at high-degree vertices (randomly perturbed),
/// then joins every non-adjacent pair by a shortest path through unclaimed
/// vertices, splitting the path between the two sets. Sets that still miss
/// adjacencies are dropped, most-missing first, so the result is always a
/// valid certificate of order <= target.
inline MinorCertificate seeded_growth(const Graph& g, std::size_t target, std::mt19937_64& rng) {
  const std::size_t n = g.num_vertices();
  target = std::min(target, n);
  if (target == 0) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, Vertex>> keyed(n);
  for (Vertex v = 0; v < n; ++v) keyed[v] = {static_cast<double>(g.degree(v)) * (1.0 + 0.5 * unit(rng)), v};
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(target), keyed.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });

  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kFree);
  std::vector<VertexSet> sets(target);
  std::vector<std::uint8_t> adjacent(target * target, 0);
  auto claim = [&](Vertex v, std::size_t i) {
    owner[v] = i;
    sets[i].push_back(v);
    for (Vertex w : g.neighbors(v)) {
      const std::size_t j = owner[w];
      if (j != kFree && j != i) adjacent[i * target + j] = adjacent[j * target + i] = 1;
    }
  };
  for (std::size_t i = 0; i < target; ++i) claim(keyed[i].second, i);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < target; ++i) {
    for (std::size_t j = i + 1; j < target; ++j) pairs.emplace_back(i, j);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);

  std::vector<Vertex> parent(n);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  std::vector<Vertex> frontier;
  for (auto [i, j] : pairs) {
    if (adjacent[i * target + j]) continue;
    ++round;
    frontier.clear();
    for (Vertex u : sets[i]) {
      for (Vertex w : g.neighbors(u)) {
        if (owner[w] == kFree && stamp[w] != round) {
          stamp[w] = round;
          parent[w] = w;
          frontier.push_back(w);
        }
      }
    }
    bool found = false;
    Vertex end = 0;
    for (std::size_t head = 0; head < frontier.size() && !found; ++head) {
      const Vertex u = frontier[head];
      for (Vertex w : g.neighbors(u)) {
        if (owner[w] == j) {
          found = true;
          end = u;
          break;
        }
      }
      if (found) break;
      for (Vertex w : g.neighbors(u)) {
        if (owner[w] == kFree && stamp[w] != round) {
          stamp[w] = round;
          parent[w] = u;
          frontier.push_back(w);
        }
      }
    }
    if (!found) continue;
    std::vector<Vertex> path;  // from the set-j end back to the set-i end
    for (Vertex v = end;; v = parent[v]) {
      path.push_back(v);
      if (parent[v] == v) break;
    }
    const std::size_t to_j = path.size() / 2;
    for (std::size_t a = 0; a < path.size(); ++a) {
      // path[0] touches set j; path.back() touches set i.
      claim(path[path.size() - 1 - a], a < path.size() - to_j ? i : j);
    }
  }

  std::vector<bool> dropped(target, false);
  for (;;) {
    std::size_t worst = kFree;
    std::size_t worst_missing = 0;
    for (std::size_t i = 0; i < target; ++i) {
      if (dropped[i]) continue;
      std::size_t missing = 0;
      for (std::size_t j = 0; j < target; ++j) {
        if (j != i && !dropped[j] && !adjacent[i * target + j]) ++missing;
      }
      if (missing > worst_missing) {
        worst_missing = missing;
        worst = i;
      }
    }
    if (worst == kFree) break;
    dropped[worst] = true;
  }
  MinorCertificate c;
  for (std::size_t i = 0; i < target; ++i) {
    if (!dropped[i]) c.branch_sets.push_back(sets[i]);
  }
  c.normalize();
  return c;
}

inline std::size_t average_degree_target(const Graph& g) {
  if (g.num_vertices() == 0) return 1;
  const double d = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.num_vertices());
  if (d <= 0.0) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(d / std::sqrt(std::max(std::log(d), 1.0)))));
}

}  // namespace detail

/// Large clique minor of g by verified heuristics.
///
/// The graph is first reduced (low-degree deletion and series suppression).
/// Small reduced components are solved exactly; larger ones get greedy
/// contraction runs and seeded growth aimed at ceil(d / sqrt(max(log d, 1)))
/// for the average degree d, backing off geometrically (t <- ceil(0.9 t)).
/// Only certificates that pass verify_minor against g are kept, so the result
/// is always valid and has order >= 1.
inline MinorCertificate dense_minor(const Graph& g, std::uint64_t seed, const DenseMinorOptions& opts = {}) {
  if (g.num_vertices() == 0) throw ParameterError("dense_minor requires a nonempty graph");
  MinorCertificate best = trivial_certificate(g);
  auto offer = [&](const MinorCertificate& candidate) {
    if (candidate.order() > best.order() && verify_minor(g, candidate).ok) best = candidate;
  };

  const detail::Reduced reduced = detail::reduce_low_degree(g);
  const std::size_t base_target = detail::average_degree_target(g);
  std::size_t comp_index = 0;
  for (const VertexSet& comp : components(reduced.graph)) {
    ++comp_index;
    if (comp.size() <= best.order()) break;
    const Subgraph sub = induced_subgraph(reduced.graph, comp);
    const std::size_t upper = hadwiger_upper(sub.graph);
    if (upper <= best.order()) continue;
    std::vector<VertexSet> groups(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) groups[i] = reduced.groups[sub.to_parent[i]];
    auto lift = [&](const MinorCertificate& local) { return lift_certificate(local, groups); };

    if (comp.size() <= std::min<std::size_t>(opts.exact_cap, 31)) {
      offer(lift(detail::exact_certificate_unchecked(sub.graph)));
      continue;
    }
    std::mt19937_64 rng(derive_seed(seed, comp_index));
    for (std::size_t r = 0; r < opts.contraction_restarts && best.order() < upper; ++r) {
      offer(lift(detail::contraction_minor(sub.graph, rng)));
    }
    std::size_t t = std::min(upper, std::max(base_target, best.order() + 1));
    for (std::size_t attempt = 0; attempt < opts.retry_budget && t > best.order(); ++attempt) {
      const MinorCertificate local = detail::seeded_growth(sub.graph, t, rng);
      offer(lift(local));
      if (local.order() >= t) {
        if (t >= upper) break;
        ++t;
      } else {
        t = std::min(t - 1, static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(t))));
      }
    }
  }
  best.normalize();
  return best;
}

}  // namespace minorperc
