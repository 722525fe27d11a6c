#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sortition/instance.hpp"
#include "sortition/selection.hpp"

namespace sortition {

enum class EstimateMethod { kExact, kMonteCarlo };

struct DistortionReport {
  double ex_ante = 1.0;
  /// Exact mode: the supremum over the support. Monte Carlo mode: the
  /// largest observed ratio, only a lower bound on the true ex-post value.
  double ex_post = 1.0;
  bool ex_post_is_lower_bound = false;
  std::size_t optimal_alternative = 0;
  double optimal_cost = 0.0;
  std::vector<double> social_costs;  // per alternative
  std::vector<double> win_prob;      // per alternative
  EstimateMethod method = EstimateMethod::kExact;
  std::size_t trials = 0;       // Monte Carlo only
  double ci_halfwidth = 0.0;    // 95% normal-approximation half-width on ex_ante
};

/// Sum over all agents of d(i, alt). Throws std::out_of_range on a bad index.
double social_cost(const Instance& instance, std::size_t alt);
std::vector<double> social_costs(const Instance& instance);

/// Sum over panel members of d(i, alt).
double panel_social_cost(const Instance& instance, const Panel& panel, std::size_t alt);

/// The panel's decision c(P): argmin of the panel social cost, lowest
/// alternative index on ties. Throws std::invalid_argument on an empty panel.
std::size_t best_alternative(const Instance& instance, const Panel& panel);

struct Optimum {
  std::size_t alternative;
  double cost;
};

/// c(N) with lowest-index tie-breaking and its social cost.
Optimum optimal_alternative(const Instance& instance);

/// Exact ex-ante distortion, win probabilities and ex-post distortion of an
/// explicit panel distribution. Panels are evaluated in parallel and
/// aggregated in support order. Throws DegenerateOptimum if SC(c(N)) = 0.
DistortionReport ex_ante_exact(const Instance& instance, const PanelDistribution& dist);

/// Monte Carlo estimate over `trials` panels, trial t drawing from the
/// stream derive_seed(seed, {t}). The result does not depend on the thread
/// count. Throws std::invalid_argument if trials == 0.
DistortionReport ex_ante_mc(const Instance& instance, const PanelSampler& sampler,
                            std::size_t trials, std::uint64_t seed);

/// max over the support of SC(c(P)) / SC(c(N)).
double ex_post_exact(const Instance& instance, const PanelDistribution& dist);

}  // namespace sortition
