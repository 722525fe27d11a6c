#include <gtest/gtest.h>

#include <cmath>

#include "sortition/bounds.hpp"
#include "sortition/distortion.hpp"
#include "sortition/errors.hpp"
#include "sortition/instance.hpp"
#include "sortition/selection.hpp"
#include "test_support.hpp"

using namespace sortition;

TEST(Distortion, SocialCostIndexChecked) {
  const Instance inst = gen_example1();
  EXPECT_THROW(social_cost(inst, 3), std::out_of_range);
}

TEST(Distortion, BestAlternativeTiesGoToLowestIndex) {
  // Agent 0 sits between two alternatives at equal distance.
  const Instance inst(line_metric(std::vector<double>{0, -1, 1}), 1, 2);
  EXPECT_EQ(best_alternative(inst, Panel({0})), 0u);
  EXPECT_THROW(best_alternative(inst, Panel()), std::invalid_argument);
  EXPECT_THROW(best_alternative(inst, Panel({1})), std::out_of_range);
}

TEST(Distortion, Example1UniformK2) {
  const Instance inst = gen_example1();
  const auto r = ex_ante_exact(inst, uniform_support(10, 2));
  EXPECT_NEAR(r.win_prob[0], 17.0 / 45, 1e-12);
  EXPECT_NEAR(r.win_prob[1], 2.0 / 5, 1e-12);
  EXPECT_NEAR(r.win_prob[2], 2.0 / 9, 1e-12);
  const double expected = (17.0 / 45 * 101 + 2.0 / 5 * 39 + 2.0 / 9 * 49) / 39;
  EXPECT_NEAR(r.ex_ante, expected, 1e-12);
  EXPECT_NEAR(r.ex_ante, 64.6444444444444 / 39, 1e-9);
  EXPECT_DOUBLE_EQ(r.ex_post, 101.0 / 39);
  EXPECT_EQ(r.optimal_alternative, 1u);
  EXPECT_FALSE(r.ex_post_is_lower_bound);
}

TEST(Distortion, Example1AllKAgainstBitmaskOracle) {
  const Instance inst = gen_example1();
  for (std::size_t k = 1; k <= 10; ++k) {
    EXPECT_NEAR(ex_ante_exact(inst, uniform_support(10, k)).ex_ante, oracle::oracle_uniform_ex_ante(inst, k), 1e-12);
  }
}

TEST(Distortion, TwoBlockExPost) {
  const Instance inst = gen_two_block(10, 2);
  const auto r = ex_ante_exact(inst, uniform_support(10, 2));
  EXPECT_DOUBLE_EQ(r.ex_post, 4.0);
  // One member from each block ties, and the tie goes to a.
  EXPECT_NEAR(r.win_prob[0], 17.0 / 45, 1e-12);
}

TEST(Distortion, DetLowerFormula) {
  for (auto [n, k, eps] : {std::tuple{50, 5, 0.1}, std::tuple{200, 10, 0.01}, std::tuple{7, 3, 0.5}}) {
    const Panel panel = Panel::first(k);
    const Instance inst = gen_det_lower(n, k, eps, panel);
    const auto r = ex_ante_exact(inst, fixed_panel_algorithm(panel));
    const double formula = ((5 - eps) * n - 2.0 * k) / (n + 2.0 * k);
    EXPECT_NEAR(r.ex_ante, formula, 1e-9);
    EXPECT_GE(r.ex_ante, det_lower_value(n, k, eps) - 1e-12);
  }
}

TEST(Distortion, FairLowerFormula) {
  const std::size_t n = 6, k = 2;
  const double eps = 0.1;
  const auto r = ex_ante_exact(gen_fair_lower(n, k, eps), uniform_support(n, k));
  EXPECT_NEAR(r.ex_ante, (9.0 * n - 6.0 * k) / ((3 + eps) * n), 1e-9);
  EXPECT_GE(r.ex_ante, fair_lower_value(n, k, eps));
}

TEST(Distortion, BadFairLine) {
  for (auto [n, delta] : {std::pair{100, 0.1}, std::pair{1000, 0.01}}) {
    const auto r = ex_ante_exact(gen_bad_fair_line(n, delta), bad_fair_algorithm(n));
    EXPECT_NEAR(r.ex_ante, 2 - delta, 1e-9);
  }
}

TEST(Distortion, DegenerateOptimum) {
  const Instance inst(line_metric(std::vector<double>{0, 0, 0}), 2, 1);
  EXPECT_THROW(ex_ante_exact(inst, uniform_support(2, 1)), DegenerateOptimum);
  EXPECT_THROW(ex_ante_mc(inst, uniform_sampler(2, 1), 10, 1), DegenerateOptimum);
}

TEST(Distortion, FullPanelHasDistortionOne) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const Instance inst = oracle::random_instance(rng, 10, 6, t % 2 == 0);
    if (oracle::oracle_social_costs(inst) == std::vector<double>(inst.m(), 0.0)) continue;
    EXPECT_DOUBLE_EQ(ex_ante_exact(inst, uniform_support(inst.n(), inst.n())).ex_ante, 1.0);
  }
}

TEST(Distortion, ScaleInvariance) {
  Rng rng(10);
  const Instance inst = gen_random_euclidean(8, 5, 2, rng);
  const auto a = ex_ante_exact(inst, uniform_support(8, 3));
  const auto b = ex_ante_exact(inst.scaled(7.5), uniform_support(8, 3));
  EXPECT_NEAR(a.ex_ante, b.ex_ante, 1e-12);
  EXPECT_EQ(a.win_prob, b.win_prob);
}

TEST(Distortion, WinProbabilitiesSumToOne) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = oracle::random_instance(rng, 9, 5, t % 2 == 0);
    for (std::size_t k = 1; k <= inst.n(); ++k) {
      const auto r = ex_ante_exact(inst, fgc_support(inst, k));
      double total = 0;
      for (double p : r.win_prob) total += p;
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_GE(r.ex_ante, 1.0 - 1e-12);
      EXPECT_GE(r.ex_post, r.ex_ante - 1e-12);
    }
  }
}

TEST(Distortion, MonteCarloAgreesWithExact) {
  const Instance inst = gen_example1();
  const auto exact = ex_ante_exact(inst, uniform_support(10, 3));
  const auto mc = ex_ante_mc(inst, uniform_sampler(10, 3), 100000, 5);
  EXPECT_NEAR(mc.ex_ante, exact.ex_ante, 4 * mc.ci_halfwidth / 1.96);
  EXPECT_TRUE(mc.ex_post_is_lower_bound);
  EXPECT_LE(mc.ex_post, exact.ex_post);
  EXPECT_EQ(mc.trials, 100000u);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(mc.win_prob[a], exact.win_prob[a], 0.01);
}

TEST(Distortion, MonteCarloIsSeedDeterministic) {
  const Instance inst = gen_example1();
  const auto a = ex_ante_mc(inst, uniform_sampler(10, 4), 5000, 77);
  const auto b = ex_ante_mc(inst, uniform_sampler(10, 4), 5000, 77);
  const auto c = ex_ante_mc(inst, uniform_sampler(10, 4), 5000, 78);
  EXPECT_EQ(a.ex_ante, b.ex_ante);
  EXPECT_EQ(a.win_prob, b.win_prob);
  EXPECT_NE(a.ex_ante, c.ex_ante);
}

TEST(Distortion, MonteCarloRejectsZeroTrials) {
  EXPECT_THROW(ex_ante_mc(gen_example1(), uniform_sampler(10, 2), 0, 1), std::invalid_argument);
}

TEST(Distortion, ExPostExact) {
  const Instance inst = gen_fgc_line_k2(200, 0.001);
  EXPECT_NEAR(ex_post_exact(inst, fgc_support(inst, 2)), 199 / 1.2, 1e-6);
}
