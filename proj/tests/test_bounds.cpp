#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minorperc/bounds.hpp"
#include "minorperc/tree_growth.hpp"

using namespace minorperc;

namespace {

// E min(Bin(n,p), K) by the pmf recurrence in long double; fine for n <= 10^4.
long double naive_restricted_mean(std::size_t n, long double p, std::size_t K) {
  if (p >= 1.0L) return static_cast<long double>(std::min(n, K));
  long double pmf = std::pow(1.0L - p, static_cast<long double>(n));
  long double mean = 0.0L;
  for (std::size_t t = 0; t <= n; ++t) {
    mean += static_cast<long double>(std::min(t, K)) * pmf;
    if (t < n) pmf *= static_cast<long double>(n - t) / static_cast<long double>(t + 1) * p / (1.0L - p);
  }
  return mean;
}

}  // namespace

TEST(Restricted, Examples) {
  const BoundReport r = restricted_binomial_lower(100, 0.02, 20);
  EXPECT_DOUBLE_EQ(r.bound, 2.0 - 20.0 * std::ldexp(1.0, -20));
  EXPECT_GE(r.value, r.bound);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.value, static_cast<double>(naive_restricted_mean(100, 0.02L, 20)), 1e-12);

  const BoundReport zero = restricted_binomial_lower(100, 0.0, 3);
  EXPECT_DOUBLE_EQ(zero.value, 0.0);
  EXPECT_DOUBLE_EQ(zero.bound, -3.0 / 8.0);
  EXPECT_TRUE(zero.holds);
}

TEST(Restricted, RefusesOutsideHypothesis) {
  EXPECT_THROW(restricted_binomial_lower(100, 0.5, 10), ParameterError);
  EXPECT_THROW(restricted_binomial_lower(100, 0.01, 0), ParameterError);
  EXPECT_THROW(restricted_binomial_lower(100, 1.5, 10), ParameterError);
  // 2enp exactly at K is refused too.
  const double p = 5.0 / (2.0 * std::exp(1.0) * 100.0);
  EXPECT_THROW(restricted_binomial_lower(100, p, 5), ParameterError);
}

TEST(Restricted, GridAgainstNaiveSum) {
  std::size_t points = 0;
  for (std::size_t n : {1, 3, 10, 40, 100, 400, 1000, 5000}) {
    for (double np : {0.01, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      for (std::size_t K : {2, 4, 8, 12, 20, 40}) {
        const double p = np / static_cast<double>(n);
        if (p > 1.0 || !(2.0 * std::exp(1.0) * np < static_cast<double>(K))) continue;
        const BoundReport r = restricted_binomial_lower(n, p, K);
        ++points;
        EXPECT_TRUE(r.holds) << n << " " << p << " " << K;
        EXPECT_GE(r.slack, 0.0);
        EXPECT_NEAR(r.value, static_cast<double>(naive_restricted_mean(n, p, K)), 1e-9) << n << " " << p << " " << K;
      }
    }
  }
  EXPECT_GE(points, 100u);
}

TEST(Restricted, StableAtMillion) {
  const BoundReport r = restricted_binomial_lower(1000000, 2e-6, 20);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.value, 2.0, 1e-3);
  EXPECT_TRUE(std::isfinite(detail::log_binomial_pmf(1000000, 0.3, 300000)));
}

TEST(Hoeffding, Examples) {
  const BoundReport zero = hoeffding_tail(10, 1, 0);
  EXPECT_DOUBLE_EQ(zero.bound, 2.0);
  EXPECT_DOUBLE_EQ(zero.as_probability, 1.0);
  EXPECT_DOUBLE_EQ(hoeffding_tail(100, 1, 10).bound, 2.0 * std::exp(-1.0));
  EXPECT_THROW(hoeffding_tail(0, 1, 1), ParameterError);
  EXPECT_THROW(hoeffding_tail(10, 0, 1), ParameterError);
  EXPECT_THROW(hoeffding_tail(10, 1, -1), ParameterError);
}

TEST(Hoeffding, FrontierExpression) {
  const double eps = 0.2;
  const std::size_t K = GrowthParams::make(10000, eps).K;
  const double r = 500, bad = 7, s = 420;
  const double t = eps / 20 * s;
  const double expr = 2 * std::exp(-eps * eps * s * s / (400 * (r - bad) * static_cast<double>(K * K)));
  EXPECT_NEAR(hoeffding_tail(r - bad, static_cast<double>(K), t).bound, expr, 1e-15);
}

TEST(Hoeffding, MonteCarlo) {
  struct Instance {
    std::size_t n;
    std::size_t K;
    double t;
  };
  // Sums of n capped binomials min(Bin(40, 1.2/40), K), the branching-phase shape.
  for (const Instance inst : {Instance{50, 2, 17.0}, Instance{200, 4, 67.0}, Instance{1000, 8, 300.0}}) {
    std::mt19937_64 rng(inst.n);
    std::binomial_distribution<int> bin(40, 1.2 / 40);
    const double mean = static_cast<double>(inst.n) * static_cast<double>(naive_restricted_mean(40, 1.2L / 40, inst.K));
    constexpr int kTrials = 10000;
    int hits = 0;
    for (int trial = 0; trial < kTrials; ++trial) {
      double sum = 0;
      for (std::size_t i = 0; i < inst.n; ++i) sum += std::min<int>(bin(rng), static_cast<int>(inst.K));
      hits += std::abs(sum - mean) >= inst.t;
    }
    const BoundReport r =
        with_empirical(hoeffding_tail(static_cast<double>(inst.n), static_cast<double>(inst.K), inst.t),
                       static_cast<double>(hits) / kTrials, kTrials);
    EXPECT_TRUE(r.holds) << inst.n << ": " << r.value << " vs " << r.as_probability;
  }
}

TEST(Chebyshev, Examples) {
  EXPECT_DOUBLE_EQ(chebyshev_eH(1).bound, 1.0);
  EXPECT_NEAR(chebyshev_eH(1000).bound, 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(chebyshev_eH(0.001).as_probability, 1.0);
  EXPECT_GT(chebyshev_eH(0.001).bound, 1.0);
  EXPECT_THROW(chebyshev_eH(0), ParameterError);
}

TEST(Chebyshev, MonteCarloOnBernoulliSums) {
  // e(H) is a sum of independent indicators, so Var <= mu; three such sums.
  for (const auto& [m, q] : {std::pair{200, 0.3}, std::pair{2000, 0.05}, std::pair{5000, 0.4}}) {
    const double mu = m * q;
    std::mt19937_64 rng(m);
    std::binomial_distribution<int> bin(m, q);
    constexpr int kTrials = 1000;
    int hits = 0;
    for (int trial = 0; trial < kTrials; ++trial) hits += std::abs(bin(rng) - mu) >= std::pow(mu, 2.0 / 3.0);
    const BoundReport r = with_empirical(chebyshev_eH(mu), static_cast<double>(hits) / kTrials, kTrials);
    EXPECT_TRUE(r.holds) << m;
  }
}

TEST(Empirical, SlackFormula) {
  BoundReport base;
  base.as_probability = 0.25;
  const BoundReport r = with_empirical(base, 0.26, 400);
  EXPECT_DOUBLE_EQ(r.value, 0.26);
  EXPECT_NEAR(r.slack, -0.01, 1e-15);
  EXPECT_TRUE(r.holds);
  EXPECT_FALSE(with_empirical(base, 0.4, 400).holds);
}

TEST(TrialFailure, Examples) {
  const BoundReport r = trial_failure_rate(0.2, 10000);
  EXPECT_DOUBLE_EQ(r.bound, 2 * std::exp(-0.8));
  EXPECT_TRUE(r.holds);
  // Independent value: P(Bin(8000, 1.1/10^4) <= 1).
  const double p1 = 1.1 / 10000;
  const double exact = std::pow(1 - p1, 8000) + 8000 * p1 * std::pow(1 - p1, 7999);
  EXPECT_NEAR(r.value, exact, 1e-10);  // lgamma round-off at n = 8000

  const BoundReport near_one = trial_failure_rate(0.999, 100);
  EXPECT_NEAR(near_one.bound, 2 * std::exp(-0.001), 1e-15);
  EXPECT_DOUBLE_EQ(near_one.as_probability, 1.0);

  const BoundReport mid = trial_failure_rate(0.5, 1000);
  EXPECT_LE(mid.value, mid.bound);
  EXPECT_THROW(trial_failure_rate(1.0, 100), ParameterError);
  EXPECT_THROW(trial_failure_rate(0.0, 100), ParameterError);
}

TEST(TrialFailure, Grid) {
  std::size_t points = 0;
  for (double eps = 0.05; eps < 1.0; eps += 0.05) {
    for (std::size_t k : {10, 30, 100, 1000, 10000, 100000, 1000000}) {
      EXPECT_TRUE(trial_failure_rate(eps, k).holds) << eps << " " << k;
      ++points;
    }
  }
  EXPECT_GE(points, 100u);
}

TEST(Chain, ValuesAgainstDirectArithmetic) {
  const std::size_t k = 10000;
  for (double eps : {0.05, 0.1, 0.2}) {
    const double delta = std::min(eps * eps / 100, 0.01);
    const ChainBound c = chain_bound(eps, k, delta);
    const auto n = std::floor((1 - 3 * delta) * k);
    const double K = std::ceil(4 * std::log(1 / eps));
    const double direct = n * (1 + eps / 2) / k - K * std::pow(2.0, -K);
    EXPECT_NEAR(c.restricted.bound, direct, 1e-12) << eps;
    EXPECT_DOUBLE_EQ(c.target, 1 + eps / 4);
    EXPECT_TRUE(c.restricted.holds);
    EXPECT_EQ(c.reaches_target, direct >= 1 + eps / 4);
  }
  // K = ceil(4 log 5) = 7 leaves K 2^{-K} = 0.0547 > eps/4 = 0.05 at eps = 0.2.
  EXPECT_TRUE(chain_bound(0.05, k, 0.05 * 0.05 / 100).reaches_target);
  EXPECT_TRUE(chain_bound(0.1, k, 0.01 * 0.01).reaches_target);
  EXPECT_FALSE(chain_bound(0.2, k, 0.0004).reaches_target);
}
