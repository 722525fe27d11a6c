#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sortition/bounds.hpp"
#include "sortition/distortion.hpp"
#include "sortition/instance.hpp"
#include "sortition/selection.hpp"
#include "sortition/sweeps.hpp"

using namespace sortition;

namespace {

// Hypergeometric pmf from the ratio recurrence p(l+1)/p(l), normalised.
std::vector<long double> oracle_hypergeom(std::uint64_t N, std::uint64_t K, std::uint64_t draws) {
  const std::uint64_t lo = draws > N - K ? draws - (N - K) : 0;
  const std::uint64_t hi = std::min(K, draws);
  std::vector<long double> p(draws + 1, 0.0L);
  p[lo] = 1.0L;
  for (std::uint64_t l = lo; l < hi; ++l) {
    p[l + 1] = p[l] * (long double)(K - l) * (long double)(draws - l) /
               ((long double)(l + 1) * (long double)(N - K - draws + l + 1));
  }
  long double total = 0;
  for (auto x : p) total += x;
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

TEST(Bounds, ClosedForms) {
  EXPECT_DOUBLE_EQ(fair_upper_bound(10, 5), 2.0);
  EXPECT_DOUBLE_EQ(fair_upper_bound(7, 7), 1.0);
  EXPECT_GT(fair_upper_bound(1000000, 1), 2.99999);
  EXPECT_THROW(fair_upper_bound(3, 4), std::invalid_argument);
  EXPECT_NEAR(det_lower_value(100, 1, 0), 5 - 12.0 / 102, 1e-15);
  EXPECT_DOUBLE_EQ(det_lower_value(9, 9, 0), 1.0);
  EXPECT_DOUBLE_EQ(fair_lower_value(10, 2, 0), 2.6);
  EXPECT_DOUBLE_EQ(fair_lower_value(4, 4, 0), 1.0);
  EXPECT_GE((9.0 * 6 - 6 * 2) / ((3 + 0.1) * 6), fair_lower_value(6, 2, 0.1));
}

TEST(Bounds, DetLowerConstructionDominatesBound) {
  for (std::size_t n = 1; n <= 60; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const double eps = 0.05;
      EXPECT_GE(((5 - eps) * n - 2.0 * k) / (n + 2.0 * k), det_lower_value(n, k, eps) - 1e-12);
    }
  }
}

TEST(Bounds, SerflingClosedForm) {
  EXPECT_NEAR(serfling_tail(1e-9, 5, 0, 1), 1.0, 1e-12);
  EXPECT_NEAR(serfling_tail(5 * 2.0, 5, 1, 3), std::exp(-10.0), 1e-15);
  EXPECT_THROW(serfling_tail(1, 5, 2, 2), std::invalid_argument);
  EXPECT_THROW(serfling_tail(1, 5, 3, 2), std::invalid_argument);
}

TEST(Bounds, SerflingDominatesEmpiricalTail) {
  // 5 of {1..10} without replacement, t = 5.
  std::vector<double> pool(10);
  const std::size_t trials = 1000000;
  std::size_t hits = 0;
  Rng rng(31);
  for (std::size_t s = 0; s < trials; ++s) {
    for (int i = 0; i < 10; ++i) pool[i] = i + 1;
    double x = 0;
    for (int i = 0; i < 5; ++i) {
      std::swap(pool[i], pool[std::uniform_int_distribution<int>(i, 9)(rng)]);
      x += pool[i];
    }
    if (x - 27.5 >= 5) ++hits;
  }
  EXPECT_LE(double(hits) / trials, serfling_tail(5, 5, 1, 10));
}

TEST(Bounds, HypergeomExactValue) {
  EXPECT_NEAR(hypergeom_pmf(20, 10, 10, 5), 63504.0 / 184756.0, 1e-15);
  EXPECT_EQ(hypergeom_pmf(20, 3, 10, 4), 0.0);
  EXPECT_EQ(hypergeom_pmf(20, 18, 10, 7), 0.0);
  EXPECT_EQ(hypergeom_pmf(5, 5, 5, 5), 1.0);
  EXPECT_THROW(hypergeom_pmf(5, 6, 2, 1), std::invalid_argument);
  EXPECT_THROW(hypergeom_pmf(5, 2, 6, 1), std::invalid_argument);
  EXPECT_THROW(hypergeom_pmf(5, 2, 2, 3), std::invalid_argument);
}

TEST(Bounds, HypergeomMatchesOracleOnBothPaths) {
  // C(70, 35) overflows 64 bits, so this exercises the log-gamma path.
  for (auto [N, K, d] : {std::tuple{20ull, 10ull, 10ull}, std::tuple{70ull, 30ull, 35ull},
                         std::tuple{400ull, 200ull, 100ull}, std::tuple{500ull, 17ull, 250ull}}) {
    const auto oracle = oracle_hypergeom(N, K, d);
    for (std::uint64_t l = 0; l <= d; ++l) {
      const double got = hypergeom_pmf(N, K, d, l);
      EXPECT_NEAR(got, double(oracle[l]), 1e-12 * std::max(1.0, double(oracle[l]))) << N << ' ' << K << ' ' << d << ' ' << l;
      if (oracle[l] > 1e-200) {
        EXPECT_NEAR(got / double(oracle[l]), 1.0, 1e-9);
      }
    }
  }
}

TEST(Bounds, HypergeomNormalises) {
  Rng rng(41);
  for (std::uint64_t N = 1; N <= 500; ++N) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto K = std::uniform_int_distribution<std::uint64_t>(0, N)(rng);
      const auto d = std::uniform_int_distribution<std::uint64_t>(0, N)(rng);
      long double total = 0;
      for (std::uint64_t l = 0; l <= d; ++l) total += hypergeom_pmf(N, K, d, l);
      EXPECT_NEAR(double(total), 1.0, 1e-12) << N << ' ' << K << ' ' << d;
    }
  }
}

TEST(Bounds, AntiConcentrationClosedForm) {
  EXPECT_NEAR(anti_concentration_lower(12, 8), std::pow(0.5, 4) / std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(anti_concentration_lower(12, 8), 0.018042195912, 1e-12);
  EXPECT_DOUBLE_EQ(anti_concentration_lower(16, 8), 0.25);
  EXPECT_THROW(anti_concentration_lower(9, 5), std::invalid_argument);
  EXPECT_THROW(anti_concentration_lower(12, 5), std::invalid_argument);
  EXPECT_THROW(anti_concentration_lower(12, 9), std::invalid_argument);
}

TEST(Bounds, AntiConcentrationHoldsWhenPanelIsHalfThePopulation) {
  for (std::size_t n = 20; n <= 200; n += 2) {
    const std::size_t k = n / 2;
    for (std::size_t l = (k + 1) / 2; 3 * l <= 2 * k; ++l) {
      EXPECT_GE(hypergeom_pmf(n, n / 2, k, l), anti_concentration_lower(k, l)) << n << ' ' << l;
    }
  }
}

TEST(Bounds, AntiConcentrationKnownCounterexample) {
  // For k well below n/2 the claimed lower bound exceeds the true pmf.
  const auto oracle = oracle_hypergeom(200, 100, 10);
  EXPECT_NEAR(hypergeom_pmf(200, 100, 10, 5), double(oracle[5]), 1e-14);
  EXPECT_NEAR(hypergeom_pmf(200, 100, 10, 5), 0.25247024987095185, 1e-12);
  EXPECT_LT(hypergeom_pmf(200, 100, 10, 5), anti_concentration_lower(10, 5));
}

TEST(Bounds, UniformPanelSize) {
  EXPECT_EQ(uniform_panel_size(1.0, 1), 63u);
  EXPECT_THROW(uniform_panel_size(0.0, 1), std::invalid_argument);
  EXPECT_THROW(uniform_panel_size(1.5, 1), std::invalid_argument);
  std::uint64_t prev_eps = UINT64_MAX;
  for (double eps = 0.05; eps <= 1.0; eps += 0.05) {
    const auto k = uniform_panel_size(eps, 10);
    EXPECT_EQ(k % 3, 0u);
    EXPECT_LE(k, prev_eps);
    prev_eps = k;
  }
  std::uint64_t prev_m = 0;
  for (std::size_t m = 1; m <= 4096; m *= 2) {
    const auto k = uniform_panel_size(0.3, m);
    EXPECT_GE(k, prev_m);
    prev_m = k;
  }
}

TEST(Bounds, Lemma1921) {
  const auto c = lemma_19_21_check(21, 4);
  EXPECT_DOUBLE_EQ(c.lhs, 17.0 / 21);
  EXPECT_TRUE(c.holds);
  EXPECT_THROW(lemma_19_21_check(10, 2), std::invalid_argument);
  EXPECT_TRUE(lemma_19_21_suite().passed());
  for (std::size_t k = 3; k <= 60; ++k) EXPECT_TRUE(lemma_19_21_check(k, k).holds);
}

TEST(Bounds, Case2LineInstance) {
  // Nine agents on c' at 0, one at 1, and an alternative at 7.5: SC(alt) = 74 SC(c').
  std::vector<double> pos(9, 0.0);
  pos.push_back(1.0);
  pos.push_back(0.0);
  pos.push_back(7.5);
  const Instance inst(line_metric(pos), 10, 2);
  EXPECT_EQ(social_cost(inst, 1), 74.0);
  const auto checks = case2_diagnostics(inst, 1, Panel::first(3));
  ASSERT_EQ(checks.size(), 2u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.holds) << c.name;
    EXPECT_EQ(c.params.at("case2"), 1.0);
  }
  EXPECT_EQ(checks[1].params.at("panel_picks_alt"), 0.0);
  EXPECT_THROW(case2_diagnostics(inst, 0, Panel::first(3)), std::invalid_argument);
}

TEST(Bounds, Case2SweepOnClusteredInstances) {
  Rng rng(53);
  std::size_t far_alternatives = 0;
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 9)(rng);
    std::uniform_real_distribution<double> near(0.0, 0.1), far(10.0, 60.0);
    std::vector<std::vector<double>> agents(n), alts(4);
    for (auto& p : agents) p = {near(rng), near(rng)};
    alts[0] = {near(rng), near(rng)};
    for (std::size_t a = 1; a < alts.size(); ++a) alts[a] = {far(rng), far(rng)};
    const Instance inst = euclidean_instance(agents, alts);
    const Optimum opt = optimal_alternative(inst);
    for (std::size_t a = 0; a < inst.m(); ++a) {
      if (a == opt.alternative || social_cost(inst, a) < 73 * opt.cost) continue;
      ++far_alternatives;
      for (std::size_t k = 1; k <= n; ++k) {
        const PanelDistribution dist = uniform_support(n, k);
        for (const auto& e : dist.support()) {
          for (const auto& c : case2_diagnostics(inst, a, e.panel)) {
            EXPECT_TRUE(c.holds) << c.name;
            EXPECT_EQ(c.params.at("case2"), 1.0);
          }
        }
      }
    }
  }
  EXPECT_GT(far_alternatives, 20u);
}

TEST(Bounds, ProbC0Estimate) {
  const auto unopposed = prob_c0_estimate(10, 1, 3, 1.0 / 30, Panel::first(3), 200, 1);
  EXPECT_EQ(unopposed.estimate, 1.0);
  const auto crowded = prob_c0_estimate(10, 2000, 5, 1.0 / 30, Panel::first(5), 200, 1);
  EXPECT_LT(crowded.estimate, 0.05);
  const auto mid = prob_c0_estimate(20, 200, 4, 1.0 / 30, Panel::first(4), 2000, 2);
  EXPECT_LE(mid.ci_low, mid.estimate);
  EXPECT_GE(mid.ci_high, mid.estimate);
  EXPECT_GE(mid.ci_low, 0.0);
  EXPECT_LE(mid.ci_high, 1.0);
  EXPECT_EQ(mid.trials, 2000u);
  EXPECT_THROW(prob_c0_estimate(10, 5, 4, 0.01, Panel::first(3), 10, 1), std::invalid_argument);
}

TEST(Sweeps, UnknownSuite) {
  EXPECT_THROW(run_suite("nope"), std::invalid_argument);
  EXPECT_EQ(suite_names().size(), 6u);
}

TEST(Sweeps, Thm6ExpectedFailureOnlyWithK2) {
  SuiteOptions opts;
  opts.instances = 20;
  const auto without = thm6_suite(opts);
  EXPECT_TRUE(without.passed());
  EXPECT_TRUE(without.expected_failures.empty());
  opts.include_k2 = true;
  const auto with = thm6_suite(opts);
  EXPECT_TRUE(with.passed());
  ASSERT_EQ(with.expected_failures.size(), 1u);
  EXPECT_FALSE(with.expected_failures[0].holds);
  EXPECT_NEAR(with.expected_failures[0].lhs, 199 / 1.2, 1e-6);
}

TEST(Sweeps, SmallSuitesPass) {
  SuiteOptions opts;
  opts.instances = 40;
  opts.trials = 20000;
  const SuiteResult fairness = fairness_suite(opts);
  for (const auto& c : fairness.checks) {
    if (c.params.at("leftover") == 0) {
      EXPECT_TRUE(c.holds);
    }
  }
  EXPECT_TRUE(thm2_suite(opts).passed());
  EXPECT_TRUE(serfling_suite(opts).passed());
}
