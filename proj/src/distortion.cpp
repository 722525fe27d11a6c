#include "sortition/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sortition/errors.hpp"
#include "sortition/numeric.hpp"

namespace sortition {
namespace {

void check_alt(const Instance& instance, std::size_t alt) {
  if (alt >= instance.m()) {
    throw std::out_of_range("alternative index " + std::to_string(alt) + " out of range (m=" +
                            std::to_string(instance.m()) + ")");
  }
}

void check_panel(const Instance& instance, const Panel& panel) {
  if (!panel.empty() && panel.members().back() >= instance.n()) {
    throw std::out_of_range("panel member " + std::to_string(panel.members().back()) +
                            " out of range (n=" + std::to_string(instance.n()) + ")");
  }
}

// Unchecked c(P).
std::size_t decide(const Instance& instance, std::span<const std::size_t> members) {
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t a = 0; a < instance.m(); ++a) {
    double cost = 0.0;
    for (std::size_t i : members) cost += instance.cost(i, a);
    if (a == 0 || cost < best_cost) {
      best = a;
      best_cost = cost;
    }
  }
  return best;
}

Optimum checked_optimum(const std::vector<double>& sc) {
  const auto it = std::min_element(sc.begin(), sc.end());
  Optimum opt{static_cast<std::size_t>(it - sc.begin()), *it};
  if (!(opt.cost > 0.0)) throw DegenerateOptimum();
  return opt;
}

}  // namespace

double social_cost(const Instance& instance, std::size_t alt) {
  check_alt(instance, alt);
  CompensatedSum acc;
  for (std::size_t i = 0; i < instance.n(); ++i) acc.add(instance.cost(i, alt));
  return acc.value();
}

std::vector<double> social_costs(const Instance& instance) {
  std::vector<double> out(instance.m());
  for (std::size_t a = 0; a < instance.m(); ++a) out[a] = social_cost(instance, a);
  return out;
}

double panel_social_cost(const Instance& instance, const Panel& panel, std::size_t alt) {
  check_alt(instance, alt);
  check_panel(instance, panel);
  double cost = 0.0;
  for (std::size_t i : panel.members()) cost += instance.cost(i, alt);
  return cost;
}

std::size_t best_alternative(const Instance& instance, const Panel& panel) {
  if (panel.empty()) throw std::invalid_argument("best_alternative: empty panel");
  check_panel(instance, panel);
  return decide(instance, panel.members());
}

Optimum optimal_alternative(const Instance& instance) {
  const auto sc = social_costs(instance);
  const auto it = std::min_element(sc.begin(), sc.end());
  return {static_cast<std::size_t>(it - sc.begin()), *it};
}

DistortionReport ex_ante_exact(const Instance& instance, const PanelDistribution& dist) {
  const auto sc = social_costs(instance);
  const Optimum opt = checked_optimum(sc);
  const auto support = dist.support();
  for (const auto& e : support) check_panel(instance, e.panel);

  std::vector<std::size_t> winner(support.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(support.size()); ++s) {
    winner[static_cast<std::size_t>(s)] = decide(instance, support[static_cast<std::size_t>(s)].panel.members());
  }

  DistortionReport report;
  report.method = EstimateMethod::kExact;
  report.optimal_alternative = opt.alternative;
  report.optimal_cost = opt.cost;
  report.social_costs = sc;
  std::vector<CompensatedSum> win(instance.m());
  CompensatedSum expected;
  double worst = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    const double p = support[s].probability;
    const double ratio = sc[winner[s]] / opt.cost;
    win[winner[s]].add(p);
    expected.add(p * ratio);
    worst = std::max(worst, ratio);
  }
  report.ex_ante = expected.value();
  report.ex_post = worst;
  report.win_prob.resize(instance.m());
  for (std::size_t a = 0; a < instance.m(); ++a) report.win_prob[a] = win[a].value();
  return report;
}

DistortionReport ex_ante_mc(const Instance& instance, const PanelSampler& sampler, std::size_t trials,
                            std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("ex_ante_mc: trials must be at least 1");
  const auto sc = social_costs(instance);
  const Optimum opt = checked_optimum(sc);

  std::vector<std::size_t> winner(trials);
  std::vector<char> bad(trials, 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t st = 0; st < static_cast<std::ptrdiff_t>(trials); ++st) {
    const auto t = static_cast<std::size_t>(st);
    Rng rng = derived_rng(seed, {t});
    const Panel panel = sampler(rng);
    if (panel.empty() || panel.members().back() >= instance.n()) {
      bad[t] = 1;
      continue;
    }
    winner[t] = decide(instance, panel.members());
  }
  if (std::find(bad.begin(), bad.end(), 1) != bad.end()) {
    throw std::invalid_argument("ex_ante_mc: sampler produced an empty or out-of-range panel");
  }

  DistortionReport report;
  report.method = EstimateMethod::kMonteCarlo;
  report.trials = trials;
  report.ex_post_is_lower_bound = true;
  report.optimal_alternative = opt.alternative;
  report.optimal_cost = opt.cost;
  report.social_costs = sc;

  std::vector<std::size_t> counts(instance.m(), 0);
  CompensatedSum sum;
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double ratio = sc[winner[t]] / opt.cost;
    ++counts[winner[t]];
    sum.add(ratio);
    worst = std::max(worst, ratio);
  }
  const double mean = sum.value() / static_cast<double>(trials);
  if (trials > 1) {
    CompensatedSum sq;
    for (std::size_t t = 0; t < trials; ++t) {
      const double dev = sc[winner[t]] / opt.cost - mean;
      sq.add(dev * dev);
    }
    const double sd = std::sqrt(sq.value() / static_cast<double>(trials - 1));
    report.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(trials));
  }
  report.ex_ante = mean;
  report.ex_post = worst;
  report.win_prob.resize(instance.m());
  for (std::size_t a = 0; a < instance.m(); ++a) {
    report.win_prob[a] = static_cast<double>(counts[a]) / static_cast<double>(trials);
  }
  return report;
}

double ex_post_exact(const Instance& instance, const PanelDistribution& dist) {
  return ex_ante_exact(instance, dist).ex_post;
}

}  // namespace sortition
