#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"

namespace minorperc {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_uint(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

/// Edge-list format: a header line "n m" followed by m lines "u v"
/// (decimal, whitespace separated). Saved files always use u < v in
/// lexicographic order; loading accepts either endpoint order.
inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };
  if (!next_line()) throw ParseError(1, "missing header line \"n m\"");
  const auto header = detail::split_ws(line);
  if (header.size() != 2) throw ParseError(line_no, "header must be \"n m\"");
  const std::uint64_t n = detail::parse_uint(header[0], line_no);
  const std::uint64_t m = detail::parse_uint(header[1], line_no);
  if (n > 0xffffffffULL) throw ParseError(line_no, "vertex count too large");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m);
  while (edges.size() < m) {
    if (!next_line()) {
      throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edges, found " +
                                        std::to_string(edges.size()));
    }
    const auto tok = detail::split_ws(line);
    if (tok.size() != 2) throw ParseError(line_no, "edge line must be \"u v\"");
    const std::uint64_t u = detail::parse_uint(tok[0], line_no);
    const std::uint64_t v = detail::parse_uint(tok[1], line_no);
    if (u >= n || v >= n) throw ParseError(line_no, "vertex id out of range [0," + std::to_string(n) + ")");
    if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    const Edge e = Edge{static_cast<Vertex>(u), static_cast<Vertex>(v)}.canonical();
    const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
    if (!seen.insert(key).second) {
      throw ParseError(line_no, "duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    edges.push_back(e);
  }
  while (next_line()) {
    if (!detail::split_ws(line).empty()) throw ParseError(line_no, "unexpected content after the last edge");
  }
  return Graph::from_edges(n, edges);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  g.for_each_edge([&](Vertex u, Vertex v) { out << u << ' ' << v << '\n'; });
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

inline void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write graph file '" + path + "'");
  write_edge_list(out, g);
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

}  // namespace minorperc
