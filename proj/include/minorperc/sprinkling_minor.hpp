#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "minorperc/dense_minor.hpp"
#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/minor.hpp"
#include "minorperc/random.hpp"

namespace minorperc {

/// A spanning forest T of V whose components are the pieces A_1..A_r, a
/// reservoir F of edges on V, and the retention probability p = c2/k.
/// Vertex ids are global ids in [0, universe).
struct SprinklingInstance {
  std::size_t universe = 0;
  std::vector<VertexSet> pieces;
  std::vector<Edge> forest;
  std::vector<Edge> reservoir;
  std::size_t k = 1;
  double b1 = 1.0;
  double b2 = 2.0;
  double c1 = 1.0;
  double c2 = 0.25;
  /// Retention probability of reservoir edges. Normally c2/k; callers that
  /// couple with an existing sprinkling round set it to that round's p.
  double p = 0.25;

  void set_c2(double value) {
    c2 = value;
    p = value / static_cast<double>(k);
  }

  std::size_t num_vertices() const {
    std::size_t total = 0;
    for (const auto& a : pieces) total += a.size();
    return total;
  }

  /// Piece index of every covered vertex; throws unless the pieces are
  /// disjoint, in range, connected in the forest, and all forest and
  /// reservoir edges stay on covered vertices.
  std::vector<std::size_t> piece_index() const {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(universe, kNone);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i].empty()) throw ParameterError("sprinkling instance has an empty piece");
      for (Vertex v : pieces[i]) {
        if (v >= universe) throw ParameterError("piece vertex outside the universe");
        if (index[v] != kNone) throw ParameterError("pieces overlap");
        index[v] = i;
      }
    }
    for (const Edge& e : forest) {
      if (e.u >= universe || e.v >= universe || index[e.u] == kNone || index[e.u] != index[e.v]) {
        throw ParameterError("forest edge must join two vertices of the same piece");
      }
    }
    for (const Edge& e : reservoir) {
      if (e.u >= universe || e.v >= universe || index[e.u] == kNone || index[e.v] == kNone) {
        throw ParameterError("reservoir edge leaves the instance vertex set");
      }
    }
    const Graph t = Graph::from_edges(universe, forest);
    if (forest.size() + pieces.size() != num_vertices()) {
      throw ParameterError("forest is not a spanning forest of the pieces");
    }
    for (const auto& a : pieces) {
      if (edges_within(t, a) + 1 != a.size()) throw ParameterError("piece is not a tree of the forest");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("retention probability outside [0,1]");
    return index;
  }
};

struct PruneResult {
  std::vector<std::size_t> survivors;  // ascending piece indices
  std::vector<Edge> edges;             // F'': cross edges among survivors
  std::size_t intra_piece_edges = 0;   // |F| - |F'|
  double threshold = 0.0;              // (c1 b1 / 4) k^{3/2}
  bool hypothesis_violated = false;    // every piece was deleted
};

/// Drops intra-piece edges (F -> F'), then deletes pieces meeting at most
/// (c1 b1 / 4) k^{3/2} remaining edges until every survivor exceeds it.
/// Deletions are processed in ascending piece index.
inline PruneResult prune_pieces(const SprinklingInstance& inst) {
  const std::vector<std::size_t> index = inst.piece_index();
  const std::size_t r = inst.pieces.size();
  PruneResult out;
  out.threshold = inst.c1 * inst.b1 / 4.0 * std::pow(static_cast<double>(inst.k), 1.5);

  std::vector<Edge> cross;
  cross.reserve(inst.reservoir.size());
  for (const Edge& e : inst.reservoir) {
    if (index[e.u] == index[e.v]) {
      ++out.intra_piece_edges;
    } else {
      cross.push_back(e.canonical());
    }
  }
  std::vector<std::vector<std::size_t>> incident(r);
  for (std::size_t i = 0; i < cross.size(); ++i) {
    incident[index[cross[i].u]].push_back(i);
    incident[index[cross[i].v]].push_back(i);
  }
  std::vector<std::size_t> count(r);
  std::set<std::size_t> queue;
  for (std::size_t i = 0; i < r; ++i) {
    count[i] = incident[i].size();
    if (static_cast<double>(count[i]) <= out.threshold) queue.insert(i);
  }
  std::vector<bool> deleted(r, false);
  while (!queue.empty()) {
    const std::size_t i = *queue.begin();
    queue.erase(queue.begin());
    deleted[i] = true;
    for (std::size_t e : incident[i]) {
      const std::size_t j = index[cross[e].u] == i ? index[cross[e].v] : index[cross[e].u];
      if (deleted[j] || queue.contains(j)) continue;
      --count[j];
      if (static_cast<double>(count[j]) <= out.threshold) queue.insert(j);
    }
  }
  // A piece's remaining count only drops through deleted neighbors; pieces
  // still queued when deleted had their counts frozen, which is harmless
  // because they are deleted regardless.
  for (std::size_t i = 0; i < r; ++i) {
    if (!deleted[i]) out.survivors.push_back(i);
  }
  for (const Edge& e : cross) {
    if (!deleted[index[e.u]] && !deleted[index[e.v]]) out.edges.push_back(e);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.hypothesis_violated = out.survivors.empty();
  return out;
}

struct CapResult {
  std::vector<Edge> edges;  // F-hat, sorted
  std::size_t removed = 0;
  std::size_t max_pair_multiplicity = 0;
  double degree_floor = 0.0;          // (c1 b1 / (4 b2^2)) k^{3/2}
  bool degree_floor_met = true;       // every survivor meets >= degree_floor F-hat edges
  double worst_retained_fraction = 1.0;  // min over survivors of |F-hat incident| / |F'' incident|
};

/// Keeps at most k edges between every pair of surviving pieces, deleting
/// the lexicographically largest excess edges.
inline CapResult cap_multiplicities(const SprinklingInstance& inst, const PruneResult& pruned) {
  const std::vector<std::size_t> index = inst.piece_index();
  std::vector<Edge> edges = pruned.edges;
  auto pair_key = [&](const Edge& e) {
    std::uint64_t a = index[e.u];
    std::uint64_t b = index[e.v];
    if (a > b) std::swap(a, b);
    return (a << 32) | b;
  };
  std::sort(edges.begin(), edges.end(), [&](const Edge& x, const Edge& y) {
    const auto kx = pair_key(x);
    const auto ky = pair_key(y);
    return kx != ky ? kx < ky : x < y;
  });
  CapResult out;
  const std::size_t r = inst.pieces.size();
  std::vector<std::size_t> before(r, 0);
  std::vector<std::size_t> after(r, 0);
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && pair_key(edges[j]) == pair_key(edges[i])) ++j;
    const std::size_t run = j - i;
    const std::size_t keep = std::min(run, inst.k);
    const std::size_t a = index[edges[i].u];
    const std::size_t b = index[edges[i].v];
    before[a] += run;
    before[b] += run;
    after[a] += keep;
    after[b] += keep;
    out.removed += run - keep;
    out.max_pair_multiplicity = std::max(out.max_pair_multiplicity, keep);
    out.edges.insert(out.edges.end(), edges.begin() + static_cast<std::ptrdiff_t>(i),
                     edges.begin() + static_cast<std::ptrdiff_t>(i + keep));
    i = j;
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.degree_floor = inst.c1 * inst.b1 / (4.0 * inst.b2 * inst.b2) * std::pow(static_cast<double>(inst.k), 1.5);
  for (std::size_t i : pruned.survivors) {
    if (static_cast<double>(after[i]) < out.degree_floor) out.degree_floor_met = false;
    if (before[i] > 0) {
      out.worst_retained_fraction =
          std::min(out.worst_retained_fraction, static_cast<double>(after[i]) / static_cast<double>(before[i]));
    }
  }
  return out;
}

/// H on the surviving pieces: i ~ j iff some F-hat edge between A_i and A_j
/// survives p-percolation.
struct AuxiliaryGraph {
  Graph graph;
  std::vector<std::size_t> piece;        // H vertex -> piece index
  std::vector<Edge> retained;            // F-hat edges kept by percolation
  /// Exact E(e(H)) = sum over pairs of 1 - (1-p)^{e(A_i,A_j)}.
  double expected_edges = 0.0;
};

inline AuxiliaryGraph build_auxiliary(const SprinklingInstance& inst, const PruneResult& pruned,
                                      const CapResult& capped, std::uint64_t seed) {
  if (!(inst.c2 < 0.5)) throw ParameterError("sprinkling requires c2 < 1/2");
  const std::vector<std::size_t> index = inst.piece_index();
  AuxiliaryGraph out;
  out.piece = pruned.survivors;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(inst.pieces.size(), kNone);
  for (std::size_t i = 0; i < out.piece.size(); ++i) local[out.piece[i]] = i;

  std::set<std::pair<Vertex, Vertex>> h_edges;
  std::unordered_map<std::uint64_t, std::size_t> multiplicity;
  for (const Edge& e : capped.edges) {
    Vertex a = static_cast<Vertex>(local[index[e.u]]);
    Vertex b = static_cast<Vertex>(local[index[e.v]]);
    if (a > b) std::swap(a, b);
    ++multiplicity[(static_cast<std::uint64_t>(a) << 32) | b];
    if (edge_coin(seed, e.u, e.v, inst.p)) {
      out.retained.push_back(e);
      h_edges.insert({a, b});
    }
  }
  for (const auto& [key, count] : multiplicity) {
    out.expected_edges += 1.0 - std::pow(1.0 - inst.p, static_cast<double>(count));
  }
  std::vector<Edge> edges;
  edges.reserve(h_edges.size());
  for (auto [a, b] : h_edges) edges.push_back({a, b});
  out.graph = Graph::from_edges(out.piece.size(), edges);
  return out;
}

struct SprinklingResult {
  MinorCertificate certificate;
  /// T union F_p over the universe: the graph the certificate is checked against.
  Graph realized;
  bool degenerate = false;
  std::string reason;
  std::size_t survivors = 0;
  std::size_t h_edges = 0;
  double expected_h_edges = 0.0;
  bool degree_floor_met = true;
};

/// T union F_p, with F_p drawn by the same edge coins as build_auxiliary.
inline Graph sprinkled_graph(const SprinklingInstance& inst, std::uint64_t seed) {
  std::vector<Edge> edges = inst.forest;
  for (auto& e : edges) e = e.canonical();
  std::sort(edges.begin(), edges.end());
  std::vector<Edge> kept;
  for (const Edge& e : inst.reservoir) {
    const Edge c = e.canonical();
    if (edge_coin(seed, c.u, c.v, inst.p) && !std::binary_search(edges.begin(), edges.end(), c)) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  edges.insert(edges.end(), kept.begin(), kept.end());
  return Graph::from_edges(inst.universe, edges);
}

/// Full pipeline: prune, cap, percolate into H, find a minor of H, and lift
/// it by replacing each H vertex by its piece. Degenerate inputs give an
/// order-1 certificate instead of an error.
inline SprinklingResult extract(const SprinklingInstance& inst, std::uint64_t seed, const DenseMinorOptions& opts = {}) {
  SprinklingResult out;
  out.realized = sprinkled_graph(inst, seed);
  auto degenerate = [&](std::string reason) {
    out.degenerate = true;
    out.reason = std::move(reason);
    out.certificate = {};
    if (!inst.pieces.empty()) out.certificate.branch_sets.push_back({inst.pieces.front().front()});
    return out;
  };
  if (inst.pieces.empty()) return degenerate("no pieces");
  const PruneResult pruned = prune_pieces(inst);
  if (pruned.hypothesis_violated) return degenerate("hypothesis violated: pruning deleted every piece");
  const CapResult capped = cap_multiplicities(inst, pruned);
  out.degree_floor_met = capped.degree_floor_met;
  const AuxiliaryGraph h = build_auxiliary(inst, pruned, capped, seed);
  out.survivors = h.graph.num_vertices();
  out.h_edges = h.graph.num_edges();
  out.expected_h_edges = h.expected_edges;

  const MinorCertificate local = dense_minor(h.graph, derive_seed(seed, 0x4d494e4fULL), opts);
  std::vector<VertexSet> groups;
  groups.reserve(h.piece.size());
  for (std::size_t i : h.piece) groups.push_back(inst.pieces[i]);
  out.certificate = lift_certificate(local, groups);
  out.certificate.normalize();
  const VerifyResult check = verify_minor(out.realized, out.certificate);
  if (!check.ok) throw ContractError("lifted sprinkling certificate failed verification: " + check.describe());
  return out;
}

}  // namespace minorperc
