#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/graph_io.hpp"

namespace minorperc {

/// Disjoint connected branch sets, pairwise joined by an edge: a K_t minor
/// with t = order().
struct MinorCertificate {
  std::vector<VertexSet> branch_sets;

  std::size_t order() const noexcept { return branch_sets.size(); }

  /// Sorts members inside each set and orders sets by smallest member.
  void normalize() {
    for (auto& s : branch_sets) std::sort(s.begin(), s.end());
    std::sort(branch_sets.begin(), branch_sets.end());
  }

  friend bool operator==(const MinorCertificate&, const MinorCertificate&) = default;
};

enum class Violation { kNone, kEmptySet, kOverlap, kDisconnected, kNotAdjacent };

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::kNone: return "none";
    case Violation::kEmptySet: return "empty branch set";
    case Violation::kOverlap: return "branch sets overlap";
    case Violation::kDisconnected: return "branch set is not connected";
    case Violation::kNotAdjacent: return "branch sets are not adjacent";
  }
  return "?";
}

struct VerifyResult {
  bool ok = true;
  Violation violation = Violation::kNone;
  /// Indices of the offending branch sets (second == first for single-set violations).
  std::size_t first = 0;
  std::size_t second = 0;

  std::string describe() const {
    if (ok) return "valid";
    std::string out = to_string(violation);
    out += " (set " + std::to_string(first);
    if (second != first) out += ", set " + std::to_string(second);
    return out + ")";
  }
};

/// Checks disjointness, then per-set connectivity, then pairwise adjacency,
/// and reports the first violation in that order. Throws ParameterError if a
/// branch set names a vertex outside the graph.
inline VerifyResult verify_minor(const Graph& g, const MinorCertificate& c) {
  const std::size_t n = g.num_vertices();
  const std::size_t t = c.order();
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kFree);
  for (std::size_t i = 0; i < t; ++i) {
    for (Vertex v : c.branch_sets[i]) {
      if (v >= n) throw ParameterError("branch set " + std::to_string(i) + " names vertex " + std::to_string(v) +
                                       " outside [0," + std::to_string(n) + ")");
    }
  }
  for (std::size_t i = 0; i < t; ++i) {
    if (c.branch_sets[i].empty()) return {false, Violation::kEmptySet, i, i};
    for (Vertex v : c.branch_sets[i]) {
      if (owner[v] != kFree) return {false, Violation::kOverlap, owner[v], i};
      owner[v] = i;
    }
  }
  std::vector<Vertex> stack;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < t; ++i) {
    const auto& set = c.branch_sets[i];
    std::size_t reached = 1;
    seen[set.front()] = true;
    stack.assign(1, set.front());
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u)) {
        if (owner[w] == i && !seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != set.size()) return {false, Violation::kDisconnected, i, i};
  }
  std::vector<bool> adjacent(t * t, false);
  for (std::size_t i = 0; i < t; ++i) {
    for (Vertex u : c.branch_sets[i]) {
      for (Vertex w : g.neighbors(u)) {
        if (owner[w] != kFree && owner[w] != i) adjacent[i * t + owner[w]] = true;
      }
    }
  }
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      if (!adjacent[i * t + j]) return {false, Violation::kNotAdjacent, i, j};
    }
  }
  return {};
}

/// Largest t with C(t,2) <= m, capped by n: a K_t minor needs C(t,2) edges.
inline std::size_t hadwiger_upper(std::size_t n, std::size_t m) {
  if (n == 0) return 0;
  std::size_t t = 1;
  while ((t + 1) * t / 2 <= m) ++t;
  return std::min(t, n);
}

inline std::size_t hadwiger_upper(const Graph& g) { return hadwiger_upper(g.num_vertices(), g.num_edges()); }

/// Certificate file: line 1 "t", then t lines of space-separated vertex ids.
inline MinorCertificate read_certificate(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing order line");
  ++line_no;
  const auto head = detail::split_ws(line);
  if (head.size() != 1) throw ParseError(line_no, "first line must hold the order t");
  const std::uint64_t t = detail::parse_uint(head[0], line_no);
  MinorCertificate c;
  c.branch_sets.reserve(t);
  while (c.branch_sets.size() < t) {
    if (!std::getline(in, line)) {
      throw ParseError(line_no + 1, "expected " + std::to_string(t) + " branch sets, found " +
                                        std::to_string(c.branch_sets.size()));
    }
    ++line_no;
    VertexSet set;
    for (auto tok : detail::split_ws(line)) {
      const std::uint64_t v = detail::parse_uint(tok, line_no);
      if (v > 0xffffffffULL) throw ParseError(line_no, "vertex id too large");
      set.push_back(static_cast<Vertex>(v));
    }
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw ParseError(line_no, "vertex repeated inside a branch set");
    }
    c.branch_sets.push_back(std::move(set));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::split_ws(line).empty()) throw ParseError(line_no, "unexpected content after the last branch set");
  }
  return c;
}

inline void write_certificate(std::ostream& out, const MinorCertificate& c) {
  out << c.order() << '\n';
  for (const auto& set : c.branch_sets) {
    for (std::size_t i = 0; i < set.size(); ++i) out << (i ? " " : "") << set[i];
    out << '\n';
  }
}

inline MinorCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open certificate file '" + path + "'");
  return read_certificate(in);
}

inline void save_certificate(const std::string& path, const MinorCertificate& c) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write certificate file '" + path + "'");
  write_certificate(out, c);
}

/// Replaces every vertex v of each branch set by groups[v] (used to lift a
/// certificate of a contracted or quotient graph back to the original graph).
inline MinorCertificate lift_certificate(const MinorCertificate& c, const std::vector<VertexSet>& groups) {
  MinorCertificate out;
  out.branch_sets.reserve(c.order());
  for (const auto& set : c.branch_sets) {
    VertexSet lifted;
    for (Vertex v : set) lifted.insert(lifted.end(), groups.at(v).begin(), groups.at(v).end());
    std::sort(lifted.begin(), lifted.end());
    out.branch_sets.push_back(std::move(lifted));
  }
  return out;
}

/// K_2 on the first edge, or K_1 on vertex 0 when the graph is edgeless.
inline MinorCertificate trivial_certificate(const Graph& g) {
  MinorCertificate c;
  if (g.num_vertices() > 0) c.branch_sets.push_back({0});
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (g.degree(u) > 0) {
      c.branch_sets = {{u}, {g.neighbors(u).front()}};
      break;
    }
  }
  return c;
}

}  // namespace minorperc
