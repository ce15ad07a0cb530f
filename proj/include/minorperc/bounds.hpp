#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "minorperc/error.hpp"
#include "minorperc/percolation.hpp"

namespace minorperc {

struct BoundReport {
  double bound = 0.0;
  /// Exact or empirical value the bound speaks about.
  double value = 0.0;
  /// value - bound for lower bounds, bound - value for upper bounds.
  double slack = 0.0;
  /// bound clamped to [0,1] when it is a probability.
  double as_probability = 0.0;
  bool holds = false;
};

namespace detail {

/// log P(Bin(n,p) = t), stable for n up to well beyond 10^6.
inline double log_binomial_pmf(std::size_t n, double p, std::size_t t) {
  if (t > n) return -std::numeric_limits<double>::infinity();
  if (p <= 0.0) return t == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return t == n ? 0.0 : -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double td = static_cast<double>(t);
  return std::lgamma(nd + 1.0) - std::lgamma(td + 1.0) - std::lgamma(nd - td + 1.0) + td * std::log(p) +
         (nd - td) * std::log1p(-p);
}

inline double clamp_probability(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace detail

/// E(min(Bin(n,p), K)) >= np - K 2^{-K}, valid when 2enp < K.
inline BoundReport restricted_binomial_lower(std::size_t n, double p, std::size_t K) {
  check_probability(p, "p");
  if (K == 0) throw ParameterError("K must be positive");
  const double np = static_cast<double>(n) * p;
  if (!(2.0 * std::exp(1.0) * np < static_cast<double>(K))) {
    throw ParameterError("restricted binomial bound requires 2enp < K");
  }
  BoundReport r;
  r.bound = np - static_cast<double>(K) * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(K, 1074)));
  // E min(X,K) = sum_{t<K} t P(t) + K P(X >= K); the tail is summed directly
  // rather than as 1 - cdf to avoid cancellation.
  double below = 0.0;
  for (std::size_t t = 1; t < K && t <= n; ++t) below += static_cast<double>(t) * std::exp(detail::log_binomial_pmf(n, p, t));
  double tail = 0.0;
  for (std::size_t t = K; t <= n; ++t) {
    const double term = std::exp(detail::log_binomial_pmf(n, p, t));
    tail += term;
    if (term < 1e-300 && static_cast<double>(t) > np) break;
  }
  r.value = below + static_cast<double>(K) * tail;
  r.slack = r.value - r.bound;
  r.as_probability = r.bound;
  r.holds = r.value >= r.bound;
  return r;
}

/// 2 exp(-t^2 / (n K^2)) for a sum of n independent variables in [0,K].
inline BoundReport hoeffding_tail(double n, double K, double t) {
  if (!(n >= 1.0) || !(K > 0.0) || !(t >= 0.0)) throw ParameterError("hoeffding_tail requires n >= 1, K > 0, t >= 0");
  BoundReport r;
  r.bound = 2.0 * std::exp(-t * t / (n * K * K));
  r.as_probability = detail::clamp_probability(r.bound);
  r.holds = true;
  return r;
}

/// mu^{-1/3}: Chebyshev bound on P(|e(H) - mu| >= mu^{2/3}) given Var <= mu.
inline BoundReport chebyshev_eH(double mu) {
  if (!(mu > 0.0)) throw ParameterError("chebyshev_eH requires mu > 0");
  BoundReport r;
  r.bound = std::pow(mu, -1.0 / 3.0);
  r.as_probability = detail::clamp_probability(r.bound);
  r.holds = true;
  return r;
}

/// Attaches an empirical frequency to an upper-bound report.
inline BoundReport with_empirical(BoundReport r, double frequency, double trials) {
  r.value = frequency;
  const double sigma = std::sqrt(std::max(r.as_probability * (1.0 - r.as_probability), 0.0) / trials);
  r.slack = r.as_probability - frequency;
  r.holds = frequency <= r.as_probability + 3.0 * sigma + 1.0 / trials;
  return r;
}

/// P(Bin(floor((1-eps)k), p1) < 2) against the k-free bound 2 e^{eps-1}.
inline BoundReport trial_failure_rate(double epsilon, std::size_t k) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("trial_failure_rate requires 0 < eps < 1");
  const PercolationParams pp = PercolationParams::make(k, epsilon);
  const auto n = static_cast<std::size_t>(std::floor((1.0 - epsilon) * static_cast<double>(k)));
  BoundReport r;
  r.value = std::exp(detail::log_binomial_pmf(n, pp.p1, 0)) + std::exp(detail::log_binomial_pmf(n, pp.p1, 1));
  r.bound = 2.0 * std::exp(epsilon - 1.0);
  r.as_probability = detail::clamp_probability(r.bound);
  r.slack = r.bound - r.value;
  r.holds = r.value <= r.bound;
  return r;
}

/// The branching-phase expectation bound: with n = floor((1-3 delta) k),
/// p = p1 and K = ceil(4 log(1/eps)), np - K 2^{-K} should reach 1 + eps/4.
struct ChainBound {
  BoundReport restricted;
  double target = 0.0;
  bool reaches_target = false;
};

inline ChainBound chain_bound(double epsilon, std::size_t k, double delta) {
  const PercolationParams pp = PercolationParams::make(k, epsilon);
  const auto n = static_cast<std::size_t>(std::floor((1.0 - 3.0 * delta) * static_cast<double>(k)));
  const auto K = static_cast<std::size_t>(std::ceil(4.0 * std::log(1.0 / epsilon)));
  ChainBound out;
  out.restricted = restricted_binomial_lower(n, pp.p1, K);
  out.target = 1.0 + epsilon / 4.0;
  out.reaches_target = out.restricted.bound >= out.target;
  return out;
}

}  // namespace minorperc
