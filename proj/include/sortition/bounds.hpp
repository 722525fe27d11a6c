#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sortition/instance.hpp"
#include "sortition/selection.hpp"

namespace sortition {

/// One numeric inequality check. `holds` is true iff lhs <= rhs.
struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::map<std::string, double> params;
};

BoundCheck make_check(std::string name, double lhs, double rhs, std::map<std::string, double> params = {});

/// Upper bound 3 - 2k/n on the ex-ante distortion of any fair algorithm.
double fair_upper_bound(std::size_t n, std::size_t k);

/// Lower bound 5 - 12k/(n+2k) - eps for deterministic algorithms.
double det_lower_value(std::size_t n, std::size_t k, double eps);

/// Lower bound 3 - 2k/n - eps holding for every selection algorithm.
double fair_lower_value(std::size_t n, std::size_t k, double eps);

/// Tail bound exp(-2 t^2 / (k (beta-alpha)^2)) on Pr[X - E[X] >= t] for a
/// sum of k values drawn without replacement from [alpha, beta].
double serfling_tail(double t, std::size_t k, double alpha, double beta);

/// Hypergeometric pmf: probability that a uniform `draws`-subset of a
/// population of `population` contains exactly l of `successes` marked
/// items. Exact integer arithmetic while every binomial fits in 64 bits,
/// long-double log-gamma otherwise.
double hypergeom_pmf(std::uint64_t population, std::uint64_t successes, std::uint64_t draws, std::uint64_t l);

/// (1/sqrt(k)) * (k/l - 1)^(2l - k), the claimed lower bound on the
/// hypergeometric pmf around the mean. Requires k >= 10, k/2 <= l <= 2k/3.
double anti_concentration_lower(std::size_t k, std::size_t l);

/// Smallest multiple of 3 that is at least
/// max{ 25/(2 eps^2) ln(144 m / eps), 3 + 3 log2(72 m / eps) }.
std::uint64_t uniform_panel_size(double eps, std::size_t m);

/// min{ (ceil(2k/3) ceil(n/k) - 1)/n, 1 - (k - ceil(2k/3) + 1)/n } <= 19/21.
BoundCheck lemma_19_21_check(std::size_t n, std::size_t k);

inline constexpr double kCase2Threshold = 72.0;

/// Per-instance checks for an alternative far from the optimum c' = c(N):
/// with D = d(alt, c') and L = {i : d(i, c') > D/4},
///   (a) |L| <= 4 n SC(c') / (SC(alt) - SC(c')),
///   (b) c(P) = alt implies |L ∩ P| >= k/3.
/// Every check carries params["case2"] = 1 when
/// SC(alt) - SC(c') >= threshold * SC(c'). Throws std::invalid_argument when
/// alt is the optimum or SC(alt) <= SC(c').
std::vector<BoundCheck> case2_diagnostics(const Instance& instance, std::size_t alt, const Panel& panel,
                                          double threshold = kCase2Threshold);

struct ProportionEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
};

/// Frequency with which `panel` (of size k) picks c0 on random lower-bound
/// family instances (gen_random_family_sample), trial t seeded from
/// (seed, t), with a 95% normal-approximation interval clipped to [0, 1].
ProportionEstimate prob_c0_estimate(std::size_t n, std::size_t m, std::size_t k, double eps,
                                    const Panel& panel, std::size_t trials, std::uint64_t seed);

}  // namespace sortition
