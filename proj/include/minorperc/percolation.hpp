#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "minorperc/error.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/random.hpp"

namespace minorperc {

/// p = (1+eps)/k split into a first round p1 = (1+eps/2)/k and a sprinkling
/// round p2 with 1 - (1-p1)(1-p2) = p exactly.
struct PercolationParams {
  std::size_t k = 0;
  double epsilon = 0.0;
  double p = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  static PercolationParams make(std::size_t k, double epsilon) {
    if (k == 0) throw ParameterError("k must be positive");
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    PercolationParams out;
    out.k = k;
    out.epsilon = epsilon;
    out.p = (1.0 + epsilon) / static_cast<double>(k);
    out.p1 = (1.0 + epsilon / 2.0) / static_cast<double>(k);
    if (out.p > 1.0) throw ParameterError("p = (1+eps)/k exceeds 1");
    out.p2 = out.p1 < 1.0 ? (out.p - out.p1) / (1.0 - out.p1) : 0.0;
    return out;
  }
};

inline void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(name) + " must lie in [0,1]");
}

/// Keeps every edge of g independently with probability p. The coin of an
/// edge is a hash of (seed, edge), so results do not depend on edge order.
inline Graph percolate(const Graph& g, double p, std::uint64_t seed) {
  check_probability(p, "p");
  return filter_edges(g, [&](Vertex u, Vertex v) { return edge_coin(seed, u, v, p); });
}

/// Union of `base` with an independent p2-percolation of host \ base.
inline Graph sprinkle(const Graph& base, const Graph& host, double p2, std::uint64_t seed) {
  check_probability(p2, "p2");
  if (base.num_vertices() != host.num_vertices()) {
    throw ParameterError("sprinkle: base and host have different vertex counts");
  }
  base.for_each_edge([&](Vertex u, Vertex v) {
    if (!host.has_edge(u, v)) {
      throw ParameterError("sprinkle: base edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") is not a host edge");
    }
  });
  return filter_edges(host, [&](Vertex u, Vertex v) {
    return base.has_edge(u, v) || edge_coin(seed, u, v, p2);
  });
}

/// Lazy one-shot revelation of host edges in the p-percolated graph.
///
/// Every host edge is sampled at most once; later queries replay the stored
/// answer. Coins come from the same counter-based hash as `percolate`, so an
/// oracle and `percolate(host, p, seed)` agree on every edge.
class EdgeOracle {
 public:
  EdgeOracle(const Graph& host, double p, std::uint64_t seed)
      : host_(&host), p_(p), seed_(seed), state_(2 * host.num_edges(), kUnknown) {
    check_probability(p, "p");
  }

  const Graph& host() const noexcept { return *host_; }
  double probability() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool query(Vertex u, Vertex v) {
    const std::size_t a = host_->slot(u, v);
    if (a == Graph::npos) {
      throw ContractError("oracle query on non-host pair (" + std::to_string(u) + "," +
                          std::to_string(v) + ")");
    }
    if (state_[a] == kUnknown) {
      const std::uint8_t s = edge_coin(seed_, u, v, p_) ? kPresent : kAbsent;
      state_[a] = s;
      state_[host_->slot(v, u)] = s;
      ++draws_;
    }
    return state_[a] == kPresent;
  }

  bool revealed(Vertex u, Vertex v) const {
    const std::size_t a = host_->slot(u, v);
    return a != Graph::npos && state_[a] != kUnknown;
  }

  /// Number of Bernoulli draws so far (distinct host edges revealed).
  std::size_t draws() const noexcept { return draws_; }

  /// Graph of the edges revealed present so far.
  Graph present_graph() const {
    return filter_edges(*host_, [&](Vertex u, Vertex v) { return state_[host_->slot(u, v)] == kPresent; });
  }

  /// Reveals every still-unknown host edge and returns the full set of present edges.
  Graph remainder_percolation() {
    host_->for_each_edge([&](Vertex u, Vertex v) { query(u, v); });
    return present_graph();
  }

 private:
  static constexpr std::uint8_t kUnknown = 0;
  static constexpr std::uint8_t kPresent = 1;
  static constexpr std::uint8_t kAbsent = 2;

  const Graph* host_;
  double p_;
  std::uint64_t seed_;
  std::vector<std::uint8_t> state_;  // indexed by CSR slot, both directions
  std::size_t draws_ = 0;
};

}  // namespace minorperc
