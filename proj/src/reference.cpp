#include "sortition/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sortition/errors.hpp"
#include "sortition/numeric.hpp"

namespace sortition::reference {

std::vector<Violation> validate_metric(const MetricSpace& m, double tol) {
  std::vector<Violation> out;
  const std::size_t size = m.size();
  for (std::size_t i = 0; i < size; ++i) {
    if (std::abs(m(i, i)) > tol) out.push_back({ViolationKind::kNonzeroDiagonal, i, i, 0, std::abs(m(i, i))});
    for (std::size_t j = 0; j < size; ++j) {
      if (j != i && m(i, j) < -tol) out.push_back({ViolationKind::kNegative, i, j, 0, -m(i, j)});
    }
    for (std::size_t j = i + 1; j < size; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        out.push_back({ViolationKind::kAsymmetry, i, j, 0, std::abs(m(i, j) - m(j, i))});
      }
      for (std::size_t via = 0; via < size; ++via) {
        if (via == i || via == j) continue;
        const double excess = m(i, j) - (m(i, via) + m(via, j));
        if (excess > tol) out.push_back({ViolationKind::kTriangle, i, j, via, excess});
      }
    }
  }
  return out;
}

MetricSpace metric_from_features(const FeatureTable& table, const FeatureWeights& weights) {
  const auto& cols = table.columns();
  if (weights.size() != cols.size()) throw std::invalid_argument("metric_from_features: weight count mismatch");
  const std::size_t n = table.rows();
  std::vector<double> spans;
  for (const auto& col : cols) {
    const auto& v = col.values;
    spans.push_back(v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()));
  }
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double total = 0.0;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& v = cols[c].values;
        double per = 0.0;
        if (cols[c].kind == FeatureKind::kCategorical) {
          per = v[i] == v[j] ? 0.0 : 1.0;
        } else if (spans[c] > 0.0) {
          per = std::abs(v[i] - v[j]) / spans[c];
        }
        total += weights.values()[c] * per;
      }
      d[i * n + j] = d[j * n + i] = total;
    }
  }
  return {n, std::move(d)};
}

BallTrace fgc_ball_trace(const AgentDistances& agents, std::size_t k) {
  const std::size_t n = agents.n;
  if (k < 1 || k > n) throw std::invalid_argument("fgc_ball_trace: need 1 <= k <= n");
  BallTrace trace;
  const std::size_t q = (n + k - 1) / k;
  trace.group_size = q;
  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;

  auto by_distance_from = [&](std::size_t c) {
    return [&agents, c](std::size_t a, std::size_t b) {
      return agents(c, a) < agents(c, b) || (agents(c, a) == agents(c, b) && a < b);
    };
  };

  while (remaining.size() >= q) {
    std::size_t center = 0;
    double best = 0.0;
    for (std::size_t idx = 0; idx < remaining.size(); ++idx) {
      const std::size_t i = remaining[idx];
      auto pool = remaining;
      std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(q - 1), pool.end(),
                       by_distance_from(i));
      const double radius = agents(i, pool[q - 1]);
      if (idx == 0 || radius < best) {
        center = i;
        best = radius;
      }
    }
    auto pool = remaining;
    std::sort(pool.begin(), pool.end(), by_distance_from(center));
    std::vector<std::size_t> group(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(q));
    std::sort(group.begin(), group.end());
    std::erase_if(remaining, [&](std::size_t i) { return std::binary_search(group.begin(), group.end(), i); });
    trace.centers.push_back(center);
    trace.radii.push_back(best);
    trace.groups.push_back(std::move(group));
  }
  trace.leftover = remaining;
  return trace;
}

namespace {

std::size_t decide(const Instance& instance, const Panel& panel) {
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t a = 0; a < instance.m(); ++a) {
    double cost = 0.0;
    for (std::size_t i : panel.members()) cost += instance.cost(i, a);
    if (a == 0 || cost < best_cost) {
      best = a;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace

DistortionReport ex_ante_exact(const Instance& instance, const PanelDistribution& dist) {
  DistortionReport r;
  r.social_costs = social_costs(instance);
  const Optimum opt = optimal_alternative(instance);
  if (!(opt.cost > 0.0)) throw DegenerateOptimum();
  r.optimal_alternative = opt.alternative;
  r.optimal_cost = opt.cost;
  std::vector<CompensatedSum> win(instance.m());
  CompensatedSum expected;
  double worst = 0.0;
  for (const auto& e : dist.support()) {
    const std::size_t c = decide(instance, e.panel);
    const double ratio = r.social_costs[c] / opt.cost;
    win[c].add(e.probability);
    expected.add(e.probability * ratio);
    worst = std::max(worst, ratio);
  }
  r.ex_ante = expected.value();
  r.ex_post = worst;
  for (const auto& w : win) r.win_prob.push_back(w.value());
  return r;
}

DistortionReport ex_ante_mc(const Instance& instance, const PanelSampler& sampler, std::size_t trials,
                            std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("ex_ante_mc: trials must be at least 1");
  DistortionReport r;
  r.method = EstimateMethod::kMonteCarlo;
  r.trials = trials;
  r.ex_post_is_lower_bound = true;
  r.social_costs = social_costs(instance);
  const Optimum opt = optimal_alternative(instance);
  if (!(opt.cost > 0.0)) throw DegenerateOptimum();
  r.optimal_alternative = opt.alternative;
  r.optimal_cost = opt.cost;

  std::vector<double> ratios;
  std::vector<std::size_t> counts(instance.m(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = derived_rng(seed, {t});
    const std::size_t c = decide(instance, sampler(rng));
    ++counts[c];
    ratios.push_back(r.social_costs[c] / opt.cost);
  }
  const auto count = static_cast<double>(trials);
  r.ex_ante = compensated_sum(ratios) / count;
  r.ex_post = *std::max_element(ratios.begin(), ratios.end());
  if (trials > 1) {
    CompensatedSum sq;
    for (double x : ratios) sq.add((x - r.ex_ante) * (x - r.ex_ante));
    r.ci_halfwidth = 1.96 * std::sqrt(sq.value() / (count - 1.0)) / std::sqrt(count);
  }
  for (std::size_t c : counts) r.win_prob.push_back(static_cast<double>(c) / count);
  return r;
}

}  // namespace sortition::reference
