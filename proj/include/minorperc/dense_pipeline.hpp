#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "minorperc/dense_minor.hpp"
#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/minor.hpp"
#include "minorperc/percolation.hpp"
#include "minorperc/random.hpp"

namespace minorperc {

struct DenseConstants {
  double nu = 0.0;
  double epsilon = 0.0;
  double c1 = 0.0;   // giant component fraction eps^2/5
  double c2 = 0.0;   // density of the giant in the host
  double c3 = 0.0;   // 1 + c2 eps/4, excess after sprinkling
  double c3p = 0.0;  // 1 + c2 eps/5, excess after removing Y
  double c4 = 0.0;   // 1 + c2 eps/8, small-set density cap
  /// beta itself underflows double for realistic eps, so log(beta) is kept.
  double log_beta = 0.0;
  double beta = 0.0;
  double mu = 0.0;    // high-degree edge fraction (mu_sparsity)
  double f_mu = 0.0;  // -mu log mu
  double gamma_target = 0.1;
};

namespace detail {

/// Largest x in [lo, hi] with feasible(x), for feasible monotone decreasing
/// in x; lo must be feasible.
template <class Pred>
double bisect_largest(double lo, double hi, Pred feasible) {
  if (feasible(hi)) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// Union-bound constants for the dense route. c2 and log(beta) are found by
/// bisection on the two feasibility inequalities.
inline DenseConstants derive_constants(double nu, double epsilon, double gamma_target = 0.1) {
  if (!(nu > 0.0 && nu <= 1.0)) throw ParameterError("nu must lie in (0,1]");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(gamma_target > 0.0)) throw ParameterError("expansion target must be positive");
  const double e = std::exp(1.0);
  DenseConstants c;
  c.nu = nu;
  c.epsilon = epsilon;
  c.gamma_target = gamma_target;
  c.c1 = epsilon * epsilon / 5.0;
  constexpr double kGridMin = 1e-12;
  const auto c2_feasible = [&](double c2) { return e / (c.c1 * nu) * (2.0 * e * c2 * (1.0 + epsilon / 2.0)) <= 0.5; };
  if (!c2_feasible(kGridMin)) throw ParameterError("no feasible c2 on the search grid");
  c.c2 = detail::bisect_largest(kGridMin, 0.5, c2_feasible);
  c.c3 = 1.0 + c.c2 * epsilon / 4.0;
  c.c3p = 1.0 + c.c2 * epsilon / 5.0;
  c.c4 = 1.0 + c.c2 * epsilon / 8.0;
  // e (e(1+eps))^{c4} beta^{c4-1} / nu <= 1/2, in log space.
  const double head = 1.0 + c.c4 * std::log(e * (1.0 + epsilon)) - std::log(nu) - std::log(0.5);
  const auto beta_feasible = [&](double lb) { return head + (c.c4 - 1.0) * lb <= 0.0; };
  constexpr double kLogGridMin = -1e12;
  if (!beta_feasible(kLogGridMin)) throw ParameterError("no feasible beta on the search grid");
  c.log_beta = detail::bisect_largest(kLogGridMin, 0.0, beta_feasible);
  c.beta = std::exp(c.log_beta);
  c.mu = c.c2 * epsilon * c.c1 * nu / 40.0;
  c.f_mu = -c.mu * std::log(c.mu);
  return c;
}

struct DenseParams {
  std::size_t k = 0;
  std::size_t n = 0;
  DenseConstants constants;
  PercolationParams perc;

  static DenseParams make(std::size_t k, std::size_t n, double nu, double epsilon, double gamma_target = 0.1) {
    DenseParams out;
    out.k = k;
    out.n = n;
    out.constants = derive_constants(nu, epsilon, gamma_target);
    out.perc = PercolationParams::make(k, epsilon);
    return out;
  }
};

struct StageRecord {
  std::string stage;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
};

/// Largest component if it has at least (eps^2/5) k vertices.
inline std::optional<VertexSet> find_giant(const Graph& gp1, const DenseParams& params) {
  if (gp1.num_vertices() == 0) return std::nullopt;
  VertexSet largest = components(gp1).front();
  if (static_cast<double>(largest.size()) < params.constants.c1 * static_cast<double>(params.k)) return std::nullopt;
  return largest;
}

/// e_G(C) >= c2 k |C|.
inline StageRecord check_component_density(const Graph& g, const VertexSet& c, const DenseParams& params) {
  StageRecord r{"density", false, static_cast<double>(edges_within(g, c)),
                params.constants.c2 * static_cast<double>(params.k) * static_cast<double>(c.size())};
  r.passed = r.measured >= r.threshold;
  return r;
}

struct HighDegreeRemoval {
  Graph graph;  // same vertex ids, edges at removed vertices dropped
  VertexSet removed;
  std::size_t max_degree_after = 0;
  double bound = 0.0;
  bool bound_met = false;
};

/// Drops the `count` highest-degree vertices (ties by smallest id).
inline HighDegreeRemoval remove_high_degree(const Graph& gp, std::size_t count, double bound) {
  const std::size_t n = gp.num_vertices();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return gp.degree(a) > gp.degree(b); });
  HighDegreeRemoval out;
  out.removed.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(count, n)));
  std::sort(out.removed.begin(), out.removed.end());
  const std::vector<bool> gone = membership(n, out.removed);
  out.graph = filter_edges(gp, [&](Vertex u, Vertex v) { return !gone[u] && !gone[v]; });
  out.max_degree_after = n ? max_degree(out.graph) : 0;
  out.bound = bound;
  out.bound_met = static_cast<double>(out.max_degree_after) <= bound;
  return out;
}

/// The pipeline's removal: ceil(f(mu) n) vertices against the bound 2 mu / f(mu).
inline HighDegreeRemoval remove_high_degree(const Graph& gp, const DenseParams& params) {
  const auto& c = params.constants;
  const auto count = static_cast<std::size_t>(std::ceil(c.f_mu * static_cast<double>(params.n)));
  return remove_high_degree(gp, count, 2.0 * c.mu / c.f_mu);
}

struct LocalSparsity {
  bool passed = false;
  bool global_ok = false;  // e(G) >= c_hi |G|
  bool small_ok = false;   // e(U) <= c_lo |U| for every found |U| <= beta |G|
  std::string mode;        // "exact" or "heuristic"
  std::size_t max_set = 0;
  std::optional<VertexSet> witness;
};

inline constexpr std::size_t kExactSparsityCap = 24;

/// (c_hi, c_lo, beta)-local sparsity. log_beta is used so that tiny beta
/// does not underflow; sets larger than floor(beta |G|) are never checked.
inline LocalSparsity check_locally_sparse(const Graph& g, double c_hi, double c_lo, double log_beta,
                                          std::uint64_t seed = 0, std::size_t restarts = 10000) {
  const std::size_t n = g.num_vertices();
  LocalSparsity out;
  out.global_ok = static_cast<double>(g.num_edges()) >= c_hi * static_cast<double>(n);
  const double limit = n ? std::exp(log_beta + std::log(static_cast<double>(n))) : 0.0;
  out.max_set = static_cast<std::size_t>(std::min(std::floor(limit), static_cast<double>(n)));
  out.small_ok = true;
  if (n <= kExactSparsityCap) {
    out.mode = "exact";
    std::vector<std::uint32_t> adj(n, 0);
    g.for_each_edge([&](Vertex u, Vertex v) {
      adj[u] |= 1u << v;
      adj[v] |= 1u << u;
    });
    for (std::uint32_t mask = 1; mask < (n == 32 ? 0u : (1u << n)) && out.small_ok; ++mask) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if (size > out.max_set) continue;
      std::size_t twice = 0;
      for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
        twice += static_cast<std::size_t>(std::popcount(adj[std::countr_zero(rest)] & mask));
      }
      if (static_cast<double>(twice / 2) > c_lo * static_cast<double>(size)) {
        out.small_ok = false;
        VertexSet w;
        for (std::uint32_t rest = mask; rest; rest &= rest - 1) w.push_back(static_cast<Vertex>(std::countr_zero(rest)));
        out.witness = std::move(w);
      }
    }
  } else {
    out.mode = "heuristic";
    // Greedy densest-subgraph growth from random starts: add the outside
    // neighbour with most edges into U, testing every prefix.
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> gain(n, 0);
    std::vector<bool> in(n, false);
    std::vector<Vertex> members;
    std::vector<Vertex> touched;
    for (std::size_t r = 0; r < restarts && out.small_ok && out.max_set >= 2; ++r) {
      const auto start = static_cast<Vertex>(rng() % n);
      if (g.degree(start) == 0) continue;
      members.assign(1, start);
      in[start] = true;
      touched.clear();
      std::size_t edges = 0;
      auto absorb = [&](Vertex v) {
        for (Vertex w : g.neighbors(v)) {
          if (in[w]) continue;
          if (gain[w]++ == 0) touched.push_back(w);
        }
      };
      absorb(start);
      while (members.size() < out.max_set) {
        Vertex best = 0;
        std::uint32_t best_gain = 0;
        std::size_t ties = 0;
        for (Vertex w : touched) {
          if (in[w] || gain[w] == 0) continue;
          if (gain[w] > best_gain) {
            best = w;
            best_gain = gain[w];
            ties = 1;
          } else if (gain[w] == best_gain && rng() % ++ties == 0) {
            best = w;
          }
        }
        if (best_gain == 0) break;
        in[best] = true;
        members.push_back(best);
        edges += best_gain;
        absorb(best);
        if (static_cast<double>(edges) > c_lo * static_cast<double>(members.size())) {
          out.small_ok = false;
          VertexSet w(members.begin(), members.end());
          std::sort(w.begin(), w.end());
          out.witness = std::move(w);
          break;
        }
      }
      for (Vertex v : members) in[v] = false;
      for (Vertex w : touched) gain[w] = 0;
    }
  }
  out.passed = out.global_ok && out.small_ok;
  return out;
}

struct ExpanderWitness {
  VertexSet vertices;
  double gamma = 0.0;
  /// "exact" when the final set was certified by enumeration, "sampled" otherwise.
  std::string mode;
  bool success = false;
  std::size_t deletions = 0;
  /// Minimum |N(U)|/|U| over all admissible U (exact mode only).
  double exact_alpha = 0.0;
  bool probe_violation = false;
};

namespace detail {

/// Smallest |N(U)|/|U| over nonempty U with |U| <= n/2, by enumeration.
/// Returns the ratio and the minimising mask (smallest mask on ties).
inline std::pair<double, std::uint32_t> min_expansion_exact(const std::vector<std::uint32_t>& adj) {
  const std::size_t n = adj.size();
  if (n < 2) return {std::numeric_limits<double>::infinity(), 0};
  const std::size_t lo_bits = n / 2;
  const std::size_t hi_bits = n - lo_bits;
  std::vector<std::uint32_t> lo_nb(std::size_t{1} << lo_bits, 0);
  std::vector<std::uint32_t> hi_nb(std::size_t{1} << hi_bits, 0);
  for (std::size_t m = 1; m < lo_nb.size(); ++m) {
    lo_nb[m] = lo_nb[m & (m - 1)] | adj[static_cast<std::size_t>(std::countr_zero(m))];
  }
  for (std::size_t m = 1; m < hi_nb.size(); ++m) {
    hi_nb[m] = hi_nb[m & (m - 1)] | adj[lo_bits + static_cast<std::size_t>(std::countr_zero(m))];
  }
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t arg = 0;
  for (std::size_t hi = 0; hi < hi_nb.size(); ++hi) {
    const int hi_size = std::popcount(hi);
    if (static_cast<std::size_t>(hi_size) > n / 2) continue;
    for (std::size_t lo = 0; lo < lo_nb.size(); ++lo) {
      const auto mask = static_cast<std::uint32_t>((hi << lo_bits) | lo);
      if (mask == 0) continue;
      const auto size = static_cast<std::size_t>(hi_size + std::popcount(lo));
      if (size > n / 2) continue;
      const auto boundary = std::popcount((lo_nb[lo] | hi_nb[hi]) & ~mask);
      const double ratio = static_cast<double>(boundary) / static_cast<double>(size);
      if (ratio < best) {
        best = ratio;
        arg = mask;
      }
    }
  }
  return {best, arg};
}

/// Vertices of the best prefix (lowest |N(U)|/|U|, |U| <= n/2) along `order`.
inline std::pair<double, std::size_t> best_sweep_prefix(const Graph& g, const std::vector<Vertex>& order) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> into(n, 0);
  std::vector<bool> in(n, false);
  std::size_t boundary = 0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < order.size() && i + 1 <= n / 2; ++i) {
    const Vertex v = order[i];
    if (into[v] > 0) --boundary;
    in[v] = true;
    for (Vertex w : g.neighbors(v)) {
      if (in[w]) continue;
      if (into[w]++ == 0) ++boundary;
    }
    const double ratio = static_cast<double>(boundary) / static_cast<double>(i + 1);
    if (ratio < best) {
      best = ratio;
      arg = i + 1;
    }
  }
  return {best, arg};
}

/// Approximate second eigenvector of the lazy normalized adjacency, by power
/// iteration with the stationary direction projected out.
inline std::vector<double> fiedler_vector(const Graph& g, std::mt19937_64& rng, std::size_t iterations = 300) {
  const std::size_t n = g.num_vertices();
  std::vector<double> sqrt_deg(n);
  double norm_top = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    sqrt_deg[v] = std::sqrt(static_cast<double>(std::max<std::size_t>(g.degree(v), 1)));
    norm_top += sqrt_deg[v] * sqrt_deg[v];
  }
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& xi : x) xi = unit(rng);
  std::vector<double> y(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    double dot = 0.0;
    for (Vertex v = 0; v < n; ++v) dot += x[v] * sqrt_deg[v];
    for (Vertex v = 0; v < n; ++v) x[v] -= dot / norm_top * sqrt_deg[v];
    for (Vertex v = 0; v < n; ++v) {
      double acc = 0.0;
      for (Vertex w : g.neighbors(v)) acc += x[w] / sqrt_deg[w];
      y[v] = 0.5 * x[v] + 0.5 * acc / sqrt_deg[v];
    }
    double norm = 0.0;
    for (double yi : y) norm += yi * yi;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (Vertex v = 0; v < n; ++v) x[v] = y[v] / norm;
  }
  for (Vertex v = 0; v < n; ++v) x[v] /= sqrt_deg[v];
  return x;
}

inline std::vector<Vertex> bfs_order(const Graph& g, Vertex start) {
  std::vector<Vertex> order{start};
  std::vector<bool> seen(g.num_vertices(), false);
  seen[start] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Vertex w : g.neighbors(order[head])) {
      if (!seen[w]) {
        seen[w] = true;
        order.push_back(w);
      }
    }
  }
  return order;
}

inline std::size_t boundary_size(const Graph& g, const std::vector<bool>& in_u, const VertexSet& u) {
  std::vector<Vertex> seen;
  for (Vertex v : u) {
    for (Vertex w : g.neighbors(v)) {
      if (!in_u[w]) seen.push_back(w);
    }
  }
  std::sort(seen.begin(), seen.end());
  return static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

/// Greedily adds boundary vertices while that lowers |N(U)|/|U|.
inline void improve_locally(const Graph& g, VertexSet& u, std::size_t cap) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> in(n, false);
  for (Vertex v : u) in[v] = true;
  std::size_t boundary = boundary_size(g, in, u);
  bool moved = true;
  while (moved && u.size() < cap) {
    moved = false;
    std::vector<bool> in_boundary(n, false);
    std::vector<Vertex> bnd;
    for (Vertex v : u) {
      for (Vertex w : g.neighbors(v)) {
        if (!in[w] && !in_boundary[w]) {
          in_boundary[w] = true;
          bnd.push_back(w);
        }
      }
    }
    std::sort(bnd.begin(), bnd.end());
    for (Vertex w : bnd) {
      std::size_t fresh = 0;
      for (Vertex x : g.neighbors(w)) fresh += !in[x] && !in_boundary[x];
      const std::size_t next = boundary - 1 + fresh;
      if (static_cast<double>(next) * static_cast<double>(u.size()) <
          static_cast<double>(boundary) * static_cast<double>(u.size() + 1)) {
        in[w] = true;
        u.push_back(w);
        boundary = next;
        moved = true;
        break;
      }
    }
  }
  std::sort(u.begin(), u.end());
}

}  // namespace detail

/// Repeatedly deletes a set U with |U| <= |W|/2 and |N(U)| < gamma |U| from
/// the current vertex set W. Search is exhaustive once |W| <= 24, otherwise
/// by components, spectral and BFS sweep cuts, and local moves; the witness
/// is labelled accordingly. Fails if fewer than `min_size` vertices remain.
inline ExpanderWitness extract_expander(const Graph& g, double gamma, std::size_t min_size, std::uint64_t seed = 0,
                                        std::size_t probes = 1000) {
  ExpanderWitness out;
  out.gamma = gamma;
  VertexSet w(g.num_vertices());
  std::iota(w.begin(), w.end(), Vertex{0});
  std::mt19937_64 rng(seed);

  while (w.size() > kExactSparsityCap) {
    const Subgraph sub = induced_subgraph(g, w);
    const auto comps = components(sub.graph);
    VertexSet remove;
    if (comps.size() > 1) {
      for (std::size_t c = 1; c < comps.size(); ++c) remove.insert(remove.end(), comps[c].begin(), comps[c].end());
    } else {
      std::vector<std::vector<Vertex>> orders;
      const std::vector<double> f = detail::fiedler_vector(sub.graph, rng);
      std::vector<Vertex> ord(sub.graph.num_vertices());
      std::iota(ord.begin(), ord.end(), Vertex{0});
      std::stable_sort(ord.begin(), ord.end(), [&](Vertex a, Vertex b) { return f[a] < f[b]; });
      orders.push_back(ord);
      orders.emplace_back(ord.rbegin(), ord.rend());
      for (int b = 0; b < 4; ++b) {
        orders.push_back(detail::bfs_order(sub.graph, static_cast<Vertex>(rng() % sub.graph.num_vertices())));
      }
      double best = std::numeric_limits<double>::infinity();
      VertexSet best_set;
      for (const auto& o : orders) {
        auto [ratio, len] = detail::best_sweep_prefix(sub.graph, o);
        if (len == 0) continue;
        VertexSet u(o.begin(), o.begin() + static_cast<std::ptrdiff_t>(len));
        detail::improve_locally(sub.graph, u, sub.graph.num_vertices() / 2);
        std::vector<bool> in(sub.graph.num_vertices(), false);
        for (Vertex v : u) in[v] = true;
        ratio = static_cast<double>(detail::boundary_size(sub.graph, in, u)) / static_cast<double>(u.size());
        if (ratio < best) {
          best = ratio;
          best_set = std::move(u);
        }
      }
      if (best < gamma) remove = std::move(best_set);
    }
    if (remove.empty()) break;
    for (auto& v : remove) v = sub.to_parent[v];
    std::sort(remove.begin(), remove.end());
    VertexSet kept;
    std::set_difference(w.begin(), w.end(), remove.begin(), remove.end(), std::back_inserter(kept));
    w = std::move(kept);
    ++out.deletions;
  }

  if (w.size() <= kExactSparsityCap) {
    while (true) {
      const Subgraph sub = induced_subgraph(g, w);
      std::vector<std::uint32_t> adj(w.size(), 0);
      sub.graph.for_each_edge([&](Vertex u, Vertex v) {
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
      });
      const auto [ratio, mask] = detail::min_expansion_exact(adj);
      if (!(ratio < gamma)) {
        out.exact_alpha = ratio;
        break;
      }
      VertexSet kept;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(mask >> i & 1u)) kept.push_back(w[i]);
      }
      w = std::move(kept);
      ++out.deletions;
    }
    out.mode = "exact";
  } else {
    out.mode = "sampled";
    // Random probes: BFS balls and uniform subsets.
    const Subgraph sub = induced_subgraph(g, w);
    const std::size_t m = sub.graph.num_vertices();
    std::vector<bool> in(m, false);
    for (std::size_t i = 0; i < probes && !out.probe_violation; ++i) {
      const std::size_t size = 1 + rng() % (m / 2);
      VertexSet u;
      if (i % 2 == 0) {
        auto o = detail::bfs_order(sub.graph, static_cast<Vertex>(rng() % m));
        o.resize(std::min(size, o.size()));
        u.assign(o.begin(), o.end());
      } else {
        std::vector<Vertex> all(m);
        std::iota(all.begin(), all.end(), Vertex{0});
        std::shuffle(all.begin(), all.end(), rng);
        u.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
      }
      for (Vertex v : u) in[v] = true;
      const std::size_t b = detail::boundary_size(sub.graph, in, u);
      for (Vertex v : u) in[v] = false;
      if (static_cast<double>(b) < gamma * static_cast<double>(u.size())) out.probe_violation = true;
    }
  }
  out.vertices = std::move(w);
  out.success = !out.vertices.empty() && out.vertices.size() >= min_size;
  return out;
}

/// Carves W into BFS clusters of a given size, takes the cluster quotient,
/// runs dense_minor there and lifts. Cluster sizes ceil(sqrt|W|), half of
/// that, ... down to 1 are tried and the best verified result kept.
inline MinorCertificate expander_minor(const Graph& g, const VertexSet& w, std::uint64_t seed,
                                       const DenseMinorOptions& opts = {}) {
  if (w.empty()) throw ParameterError("expander_minor needs a nonempty vertex set");
  const Subgraph sub = induced_subgraph(g, w);
  const std::size_t m = sub.graph.num_vertices();
  MinorCertificate best;
  best.branch_sets.push_back({w.front()});
  const std::size_t upper = hadwiger_upper(sub.graph);
  std::size_t size = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
  for (std::uint64_t attempt = 0; best.order() < upper; ++attempt) {
    std::vector<std::size_t> cluster(m, static_cast<std::size_t>(-1));
    std::vector<VertexSet> groups;
    for (Vertex s = 0; s < m; ++s) {
      if (cluster[s] != static_cast<std::size_t>(-1)) continue;
      const std::size_t id = groups.size();
      groups.push_back({s});
      cluster[s] = id;
      for (std::size_t head = 0; head < groups[id].size() && groups[id].size() < size; ++head) {
        for (Vertex x : sub.graph.neighbors(groups[id][head])) {
          if (cluster[x] != static_cast<std::size_t>(-1) || groups[id].size() >= size) continue;
          cluster[x] = id;
          groups[id].push_back(x);
        }
      }
    }
    std::vector<Edge> qe;
    sub.graph.for_each_edge([&](Vertex u, Vertex v) {
      if (cluster[u] != cluster[v]) {
        qe.push_back(Edge{static_cast<Vertex>(cluster[u]), static_cast<Vertex>(cluster[v])}.canonical());
      }
    });
    std::sort(qe.begin(), qe.end());
    qe.erase(std::unique(qe.begin(), qe.end()), qe.end());
    const Graph quotient = Graph::from_edges(groups.size(), qe);
    for (auto& grp : groups) std::sort(grp.begin(), grp.end());
    MinorCertificate local = lift_certificate(dense_minor(quotient, derive_seed(seed, attempt), opts), groups);
    if (verify_minor(sub.graph, local).ok && local.order() > best.order()) {
      for (auto& set : local.branch_sets) {
        for (auto& v : set) v = sub.to_parent[v];
      }
      local.normalize();
      best = std::move(local);
    }
    if (size == 1) break;
    size = (size + 1) / 2;
  }
  return best;
}

struct DenseRun {
  MinorCertificate certificate;
  Graph realized;
  std::vector<StageRecord> stages;
  /// "expander" or "giant-dense": which candidate gave the certificate.
  std::string method;
  /// First stage that did not pass, or "none".
  std::string failed_stage = "none";
  std::string expander_mode;
};

/// The dense route on a host with min degree >= k >= nu n. Each stage is
/// recorded; failures do not stop the run, which always returns the best
/// verified certificate found.
inline DenseRun run_dense(const Graph& g, const DenseParams& params, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  const auto& c = params.constants;
  if (n == 0) throw ParameterError("dense pipeline needs a nonempty host");
  if (params.n != n) throw ParameterError("dense parameters were made for a different vertex count");
  if (min_degree(g) < params.k) throw ParameterError("host minimum degree is below k");
  if (static_cast<double>(params.k) < c.nu * static_cast<double>(n)) throw ParameterError("k is below nu n");

  DenseRun out;
  auto record = [&](StageRecord r) {
    if (!r.passed && out.failed_stage == "none") out.failed_stage = r.stage;
    out.stages.push_back(std::move(r));
  };
  const Graph gp1 = percolate(g, params.perc.p1, derive_seed(seed, 1));
  out.realized = sprinkle(gp1, g, params.perc.p2, derive_seed(seed, 2));

  const std::optional<VertexSet> giant = find_giant(gp1, params);
  const VertexSet c0 = giant ? *giant : components(gp1).front();
  record({"giant", giant.has_value(), static_cast<double>(c0.size()), c.c1 * static_cast<double>(params.k)});
  record(check_component_density(g, c0, params));

  const double excess = static_cast<double>(edges_within(out.realized, c0));
  record({"excess", excess >= c.c3 * static_cast<double>(c0.size()), excess, c.c3 * static_cast<double>(c0.size())});

  const HighDegreeRemoval removal = remove_high_degree(out.realized, params);
  record({"max-degree", removal.bound_met, static_cast<double>(removal.max_degree_after), removal.bound});

  VertexSet c_prime;
  std::set_difference(c0.begin(), c0.end(), removal.removed.begin(), removal.removed.end(),
                      std::back_inserter(c_prime));
  MinorCertificate best;
  best.branch_sets.push_back({c0.front()});
  out.method = "giant-dense";
  if (!c_prime.empty()) {
    const Subgraph core = induced_subgraph(removal.graph, c_prime);
    const LocalSparsity sparse = check_locally_sparse(core.graph, c.c3p, c.c4, c.log_beta, derive_seed(seed, 4));
    record({"locally-sparse", sparse.passed, static_cast<double>(core.graph.num_edges()),
            c.c3p * static_cast<double>(c_prime.size())});

    const double beta_n = std::exp(c.log_beta + std::log(static_cast<double>(n)));
    const auto min_size = static_cast<std::size_t>(std::ceil(beta_n));
    const ExpanderWitness witness = extract_expander(core.graph, c.gamma_target, min_size, derive_seed(seed, 5));
    out.expander_mode = witness.mode;
    record({"expander", witness.success && !witness.probe_violation, static_cast<double>(witness.vertices.size()),
            beta_n});
    if (!witness.vertices.empty()) {
      MinorCertificate local = expander_minor(core.graph, witness.vertices, derive_seed(seed, 6));
      for (auto& set : local.branch_sets) {
        for (auto& v : set) v = core.to_parent[v];
      }
      local.normalize();
      if (local.order() > best.order()) {
        best = std::move(local);
        out.method = "expander";
      }
    }
  } else {
    record({"locally-sparse", false, 0.0, 0.0});
    record({"expander", false, 0.0, 0.0});
  }

  // Direct candidate on the realized giant.
  {
    const Subgraph giant_sub = induced_subgraph(out.realized, c0);
    MinorCertificate local = dense_minor(giant_sub.graph, derive_seed(seed, 7));
    for (auto& set : local.branch_sets) {
      for (auto& v : set) v = giant_sub.to_parent[v];
    }
    local.normalize();
    if (local.order() > best.order()) {
      best = std::move(local);
      out.method = "giant-dense";
    }
  }
  best.normalize();
  const VerifyResult check = verify_minor(out.realized, best);
  if (!check.ok) throw ContractError("dense pipeline certificate failed verification: " + check.describe());
  if (best.order() > hadwiger_upper(out.realized)) throw ContractError("certificate exceeds the edge-count bound");
  out.certificate = std::move(best);
  return out;
}

}  // namespace minorperc
