#pragma once

#include <cstdint>
#include <utility>

namespace minorperc {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed; used for trial seeds and per-stage streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(seed, a), b);
}

// Counter-based edge randomness: the coin of edge {u, v} depends only on
// (seed, min, max), never on the order in which edges are examined.
inline double edge_uniform(std::uint64_t seed, std::uint32_t u, std::uint32_t v) noexcept {
  if (u > v) std::swap(u, v);
  const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
  const std::uint64_t h = splitmix64(seed ^ splitmix64(key));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline bool edge_coin(std::uint64_t seed, std::uint32_t u, std::uint32_t v, double p) noexcept {
  return edge_uniform(seed, u, v) < p;
}

}  // namespace minorperc
