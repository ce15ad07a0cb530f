#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minorperc/dense_minor.hpp"
#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/minor.hpp"
#include "minorperc/percolation.hpp"
#include "minorperc/random.hpp"
#include "minorperc/sprinkling_minor.hpp"
#include "minorperc/tree_tools.hpp"

namespace minorperc {

struct GrowthParams {
  std::size_t k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t N = 3;  // initial tree size
  std::size_t K = 2;  // max children per frontier vertex
  PercolationParams perc;

  static GrowthParams make(std::size_t k, double epsilon, std::optional<double> delta = {},
                           std::optional<std::size_t> K_override = {}) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("tree growth requires 0 < epsilon < 1");
    GrowthParams out;
    out.perc = PercolationParams::make(k, epsilon);
    out.k = k;
    out.epsilon = epsilon;
    const double delta_cap = epsilon * epsilon / 100.0;
    out.delta = delta.value_or(std::min(delta_cap, 0.01));
    if (!(out.delta > 0.0 && out.delta <= delta_cap)) throw ParameterError("delta must lie in (0, eps^2/100]");
    const double kd = static_cast<double>(k);
    // log log log k is only positive once log log k > 1.
    if (kd > std::exp(std::exp(1.0))) {
      const double lll = std::log(std::log(std::log(kd)));
      out.N = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(lll)));
    }
    out.K = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(4.0 * std::log(1.0 / epsilon))));
    if (K_override) {
      if (*K_override < 2) throw ParameterError("K must be at least 2");
      out.K = *K_override;
    }
    return out;
  }

  /// 1 - gamma = 2 e^{eps-1}: the per-trial failure bound of the initial phase.
  double gamma() const { return 1.0 - 2.0 * std::exp(epsilon - 1.0); }

  /// Number of roots the initial phase may try: ceil(gamma^{-N} N), or every
  /// vertex when gamma <= 0 makes the bound vacuous.
  std::size_t root_budget(std::size_t n) const {
    const double g = gamma();
    if (!(g > 0.0)) return n;
    const double budget = std::ceil(std::pow(g, -static_cast<double>(N)) * static_cast<double>(N));
    return budget >= static_cast<double>(n) ? n : static_cast<std::size_t>(budget);
  }
};

enum class VertexStatus : std::uint8_t { kUnused, kDiscarded, kTree, kNext };

struct GrowthState {
  EdgeOracle oracle;
  std::vector<VertexStatus> status;
  std::vector<Vertex> tree;           // V(T_t) in insertion order
  std::vector<Edge> tree_edges;       // (parent, child)
  std::vector<Vertex> frontier;       // S_t
  std::vector<Vertex> discarded;      // X
  std::vector<std::uint32_t> tree_degree;
  Vertex root = 0;
  std::size_t step = 0;

  GrowthState(const Graph& host, double p, std::uint64_t seed)
      : oracle(host, p, seed), status(host.num_vertices(), VertexStatus::kUnused),
        tree_degree(host.num_vertices(), 0) {}

  std::size_t max_tree_degree() const {
    std::uint32_t best = 0;
    for (Vertex v : tree) best = std::max(best, tree_degree[v]);
    return best;
  }
};

struct InitialPhaseResult {
  bool success = false;
  std::size_t roots_used = 0;
  std::size_t budget = 0;
};

/// Grows partial binary trees of size N or N+1: a leaf (the root at first)
/// exposes its edges to unused vertices and takes its two smallest revealed
/// neighbours as children (one for the root). A leaf with too few moves the
/// whole attempt to X and a fresh root, the smallest unused id, starts over.
inline InitialPhaseResult initial_phase(const Graph& g, const GrowthParams& params, GrowthState& state) {
  const std::size_t n = g.num_vertices();
  InitialPhaseResult out;
  out.budget = params.root_budget(n);
  Vertex scan = 0;
  while (out.roots_used < out.budget) {
    while (scan < n && state.status[scan] != VertexStatus::kUnused) ++scan;
    if (scan == n) break;
    const Vertex r = scan;
    ++out.roots_used;
    std::vector<Vertex> attempt{r};
    std::vector<Edge> edges;
    std::vector<Vertex> leaves;  // FIFO of unexpanded non-root leaves
    std::size_t head = 0;
    state.status[r] = VertexStatus::kTree;
    bool failed = false;
    while (attempt.size() < params.N) {
      const bool at_root = attempt.size() == 1;
      const Vertex v = at_root ? r : leaves[head];
      const std::size_t need = at_root ? 1 : 2;
      std::vector<Vertex> revealed;
      for (Vertex w : g.neighbors(v)) {
        if (state.status[w] == VertexStatus::kUnused && state.oracle.query(v, w)) revealed.push_back(w);
      }
      if (revealed.size() < need) {
        failed = true;
        break;
      }
      if (!at_root) ++head;
      for (std::size_t i = 0; i < need; ++i) {
        const Vertex w = revealed[i];
        state.status[w] = VertexStatus::kTree;
        attempt.push_back(w);
        edges.push_back({v, w});
        leaves.push_back(w);
      }
    }
    if (failed) {
      for (Vertex v : attempt) {
        state.status[v] = VertexStatus::kDiscarded;
        state.discarded.push_back(v);
      }
      continue;
    }
    state.root = r;
    state.tree = attempt;
    state.tree_edges = edges;
    for (const Edge& e : edges) {
      ++state.tree_degree[e.u];
      ++state.tree_degree[e.v];
    }
    state.frontier.assign(leaves.begin() + static_cast<std::ptrdiff_t>(head), leaves.end());
    out.success = true;
    return out;
  }
  return out;
}

enum class LayerExit { kContinue, kDenseTree, kDenseBad, kStalled };

inline const char* to_string(LayerExit e) {
  switch (e) {
    case LayerExit::kContinue: return "continue";
    case LayerExit::kDenseTree: return "dense-tree";
    case LayerExit::kDenseBad: return "dense-bad";
    case LayerExit::kStalled: return "stalled";
  }
  return "?";
}

struct LayerOutcome {
  LayerExit exit = LayerExit::kContinue;
  std::size_t v0 = 0;
  std::size_t bad = 0;
  std::size_t next_frontier = 0;
  /// Vertices and forest edges of the exposed structure T_t (plus F(j) and
  /// S_{t+1}(j) for the bad-vertex exit and for Stalled).
  std::vector<Vertex> structure;
  std::vector<Edge> structure_edges;
  /// Host edges counted for the dense-exit reservoir bound, and that bound.
  std::size_t reservoir_count = 0;
  double reservoir_bound = 0.0;
};

namespace detail {

inline void check_growth_invariants(const GrowthParams& params, const GrowthState& state, const char* where) {
  const double share = params.epsilon / 16.0 * static_cast<double>(state.tree.size());
  if (static_cast<double>(state.frontier.size()) < share) {
    throw ContractError(std::string(where) + ": frontier smaller than (eps/16)|T_t|");
  }
  if (state.max_tree_degree() > params.K + 1) {
    throw ContractError(std::string(where) + ": tree degree exceeds K+1");
  }
}

}  // namespace detail

/// One step of the branching phase. On Continue the state advances to
/// T_{t+1}, S_{t+1}; on the other exits the state is left as it was and the
/// outcome carries the structure for sprinkling.
inline LayerOutcome grow_layer(const Graph& g, const GrowthParams& params, GrowthState& state) {
  detail::check_growth_invariants(params, state, "grow_layer entry");
  for (Vertex s : state.frontier) {
    for (Vertex w : g.neighbors(s)) {
      if (state.status[w] == VertexStatus::kUnused && state.oracle.revealed(s, w)) {
        throw ContractError("grow_layer entry: frontier edge to an unused vertex already exposed");
      }
    }
  }
  const double kd = static_cast<double>(params.k);
  const double dk = params.delta * kd;
  const double st = static_cast<double>(state.frontier.size());
  LayerOutcome out;

  std::vector<Vertex> v1;
  for (Vertex s : state.frontier) {
    std::size_t into_tree = 0;
    for (Vertex w : g.neighbors(s)) into_tree += state.status[w] == VertexStatus::kTree;
    if (static_cast<double>(into_tree) >= dk) {
      ++out.v0;
    } else {
      v1.push_back(s);
    }
  }
  if (static_cast<double>(out.v0) >= params.delta * st) {
    out.exit = LayerExit::kDenseTree;
    out.structure = state.tree;
    out.structure_edges = state.tree_edges;
    out.reservoir_count = edges_within(g, state.tree);
    out.reservoir_bound = params.delta * params.delta / 2.0 * st * kd;
    if (static_cast<double>(out.reservoir_count) < out.reservoir_bound) {
      throw ContractError("dense tree exit with fewer reservoir edges than (delta^2/2)|S_t|k");
    }
    return out;
  }

  std::vector<Vertex> next;
  std::vector<Edge> stars;
  std::vector<Vertex> bad;
  auto restore = [&] {
    for (Vertex w : next) state.status[w] = VertexStatus::kUnused;
  };
  for (Vertex s : v1) {
    std::size_t into_next = 0;
    for (Vertex w : g.neighbors(s)) into_next += state.status[w] == VertexStatus::kNext;
    if (static_cast<double>(into_next) >= dk) {
      bad.push_back(s);
      if (static_cast<double>(bad.size()) >= params.delta * st) {
        out.exit = LayerExit::kDenseBad;
        out.bad = bad.size();
        out.next_frontier = next.size();
        out.structure = state.tree;
        out.structure.insert(out.structure.end(), next.begin(), next.end());
        out.structure_edges = state.tree_edges;
        out.structure_edges.insert(out.structure_edges.end(), stars.begin(), stars.end());
        for (Vertex b : bad) {
          for (Vertex w : g.neighbors(b)) out.reservoir_count += state.status[w] == VertexStatus::kNext;
        }
        out.reservoir_bound = params.delta * params.delta * st * kd;
        restore();
        if (static_cast<double>(out.reservoir_count) < out.reservoir_bound) {
          throw ContractError("dense bad-vertex exit with fewer than delta^2|S_t|k reservoir edges");
        }
        return out;
      }
      continue;
    }
    std::size_t taken = 0;
    for (Vertex w : g.neighbors(s)) {
      if (state.status[w] != VertexStatus::kUnused) continue;
      if (state.oracle.revealed(s, w)) throw ContractError("exposure audit: edge revealed before its turn");
      if (!state.oracle.query(s, w)) continue;
      if (taken == params.K) continue;  // revealed, but the star is full
      state.status[w] = VertexStatus::kNext;
      next.push_back(w);
      stars.push_back({s, w});
      ++taken;
    }
  }
  out.bad = bad.size();
  out.next_frontier = next.size();
  if (static_cast<double>(next.size()) < (1.0 + params.epsilon / 8.0) * st) {
    out.exit = LayerExit::kStalled;
    out.structure = state.tree;
    out.structure.insert(out.structure.end(), next.begin(), next.end());
    out.structure_edges = state.tree_edges;
    out.structure_edges.insert(out.structure_edges.end(), stars.begin(), stars.end());
    restore();
    return out;
  }
  for (Vertex w : next) state.status[w] = VertexStatus::kTree;
  for (const Edge& e : stars) {
    ++state.tree_degree[e.u];
    ++state.tree_degree[e.v];
  }
  state.tree.insert(state.tree.end(), next.begin(), next.end());
  state.tree_edges.insert(state.tree_edges.end(), stars.begin(), stars.end());
  state.frontier = std::move(next);
  ++state.step;
  detail::check_growth_invariants(params, state, "grow_layer exit");
  out.exit = LayerExit::kContinue;
  return out;
}

struct StepTrace {
  std::size_t step = 0;
  std::size_t tree = 0;
  std::size_t frontier = 0;
  std::size_t discarded = 0;
  std::size_t bad = 0;
  std::string exit;
};

struct GrowthRun {
  MinorCertificate certificate;
  /// "sprinkling" when the certificate came from the sprinkling lemma on the
  /// dense exit, "fallback" otherwise.
  std::string method;
  /// "dense-tree", "dense-bad", "stalled" or "initial-failure".
  std::string exit_kind;
  Graph realized;
  std::vector<StepTrace> trace;
  std::size_t pieces = 0;
  bool sprinkling_degenerate = false;
  std::size_t roots_used = 0;
};

/// Sprinkling instance on the exposed structure: pieces from
/// forest_partition with C = K+1, reservoir = host edges spanned by the
/// pieces, retention probability p2. Returns nothing when no piece forms.
inline std::optional<SprinklingInstance> structure_instance(const Graph& g, const GrowthParams& params,
                                                            const std::vector<Vertex>& vertices,
                                                            const std::vector<Edge>& forest) {
  const std::size_t C = params.K + 1;
  PiecePartition part = forest_partition(vertices, forest, params.k, C);
  if (part.pieces.empty()) return std::nullopt;
  SprinklingInstance inst;
  inst.universe = g.num_vertices();
  inst.k = params.k;
  inst.pieces = std::move(part.pieces);
  VertexSet covered;
  for (const auto& a : inst.pieces) covered.insert(covered.end(), a.begin(), a.end());
  std::sort(covered.begin(), covered.end());
  const std::vector<bool> in = membership(g.num_vertices(), covered);
  std::vector<std::size_t> piece_of(g.num_vertices(), 0);
  for (std::size_t i = 0; i < inst.pieces.size(); ++i) {
    for (Vertex v : inst.pieces[i]) piece_of[v] = i;
  }
  for (const Edge& e : forest) {
    if (in[e.u] && in[e.v] && piece_of[e.u] == piece_of[e.v]) inst.forest.push_back(e.canonical());
  }
  for (Vertex u : covered) {
    for (Vertex w : g.neighbors(u)) {
      if (u < w && in[w]) inst.reservoir.push_back({u, w});
    }
  }
  const double s = static_cast<double>(isqrt(params.k));
  const double rk = std::sqrt(static_cast<double>(params.k));
  inst.b1 = s / rk;
  inst.b2 = static_cast<double>(C + 1) * s / rk;
  inst.c1 = static_cast<double>(inst.reservoir.size()) /
            (static_cast<double>(params.k) * static_cast<double>(covered.size()));
  inst.c2 = params.perc.p2 * static_cast<double>(params.k);
  inst.p = params.perc.p2;
  return inst;
}

namespace detail {

/// dense_minor on the realized graph restricted to the host component of v.
inline MinorCertificate component_fallback(const Graph& g, const Graph& realized, Vertex v, std::uint64_t seed) {
  for (const VertexSet& comp : components(g)) {
    if (!std::binary_search(comp.begin(), comp.end(), v)) continue;
    const Subgraph sub = induced_subgraph(realized, comp);
    MinorCertificate local = dense_minor(sub.graph, seed);
    for (auto& set : local.branch_sets) {
      for (auto& x : set) x = sub.to_parent[x];
    }
    local.normalize();
    return local;
  }
  return {};
}

}  // namespace detail

/// Exposes G_{p1} through the oracle while growing the tree, then sprinkles
/// p2 on the host. The certificate is checked against that realized graph.
inline GrowthRun run(const Graph& g, const GrowthParams& params, std::uint64_t seed) {
  if (g.num_vertices() == 0) throw ParameterError("tree growth needs a nonempty host");
  if (min_degree(g) < params.k) throw ParameterError("host minimum degree is below k");
  const std::uint64_t oracle_seed = derive_seed(seed, 1);
  const std::uint64_t sprinkle_seed = derive_seed(seed, 2);
  const std::uint64_t minor_seed = derive_seed(seed, 3);

  GrowthRun out;
  GrowthState state(g, params.perc.p1, oracle_seed);
  const InitialPhaseResult init = initial_phase(g, params, state);
  out.roots_used = init.roots_used;

  std::optional<LayerOutcome> last;
  if (!init.success) {
    out.exit_kind = "initial-failure";
    out.trace.push_back({0, 0, 0, state.discarded.size(), 0, out.exit_kind});
  } else {
    while (true) {
      LayerOutcome layer = grow_layer(g, params, state);
      out.trace.push_back({state.step, state.tree.size(), state.frontier.size(), state.discarded.size(), layer.bad,
                           to_string(layer.exit)});
      if (layer.exit != LayerExit::kContinue) {
        out.exit_kind = to_string(layer.exit);
        last = std::move(layer);
        break;
      }
    }
  }

  const Graph first_round = state.oracle.remainder_percolation();
  out.realized = sprinkle(first_round, g, params.perc.p2, sprinkle_seed);

  MinorCertificate best;
  if (last) {
    if (auto inst = structure_instance(g, params, last->structure, last->structure_edges)) {
      out.pieces = inst->pieces.size();
      SprinklingResult sr = extract(*inst, sprinkle_seed);
      out.sprinkling_degenerate = sr.degenerate;
      if (!sr.degenerate) {
        best = std::move(sr.certificate);
        out.method = "sprinkling";
      }
    } else {
      out.sprinkling_degenerate = true;
    }
  }
  const bool dense_exit = last && last->exit != LayerExit::kStalled;
  if (!dense_exit || out.method.empty()) {
    const Vertex anchor = init.success ? state.root : 0;
    MinorCertificate fb = detail::component_fallback(g, out.realized, anchor, minor_seed);
    if (fb.order() > best.order()) {
      best = std::move(fb);
      out.method = "fallback";
    }
  }
  if (out.method.empty()) out.method = "fallback";
  if (best.order() == 0) best.branch_sets.push_back({init.success ? state.root : Vertex{0}});
  best.normalize();
  const VerifyResult check = verify_minor(out.realized, best);
  if (!check.ok) throw ContractError("tree growth certificate failed verification: " + check.describe());
  out.certificate = std::move(best);
  return out;
}

}  // namespace minorperc
