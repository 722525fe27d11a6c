#include "sortition/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sortition/errors.hpp"
#include "sortition/instance.hpp"
#include "sortition/numeric.hpp"

namespace sortition {

Panel::Panel(std::vector<std::size_t> members) : members_(std::move(members)) {
  if (!std::is_sorted(members_.begin(), members_.end())) std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw std::invalid_argument("panel has duplicate members");
  }
}

Panel Panel::first(std::size_t k) {
  std::vector<std::size_t> m(k);
  std::iota(m.begin(), m.end(), 0);
  return Panel(std::move(m));
}

bool Panel::contains(std::size_t agent) const {
  return std::binary_search(members_.begin(), members_.end(), agent);
}

PanelDistribution::PanelDistribution(std::size_t k, std::vector<SupportEntry> support)
    : k_(k), support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("panel distribution has empty support");
  CompensatedSum total;
  for (const auto& e : support_) {
    if (e.panel.size() != k_) throw std::invalid_argument("panel distribution mixes panel sizes");
    if (!(e.probability > 0.0)) throw std::invalid_argument("panel distribution has a nonpositive probability");
    total.add(e.probability);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw std::invalid_argument("panel distribution probabilities sum to " + std::to_string(total.value()));
  }
  const auto less = [](const SupportEntry& a, const SupportEntry& b) { return a.panel < b.panel; };
  bool distinct = true;
  if (std::is_sorted(support_.begin(), support_.end(), less)) {
    for (std::size_t i = 1; i < support_.size() && distinct; ++i) {
      distinct = support_[i - 1].panel != support_[i].panel;
    }
  } else {
    std::vector<const Panel*> sorted;
    sorted.reserve(support_.size());
    for (const auto& e : support_) sorted.push_back(&e.panel);
    std::sort(sorted.begin(), sorted.end(), [](const Panel* a, const Panel* b) { return *a < *b; });
    for (std::size_t i = 1; i < sorted.size() && distinct; ++i) distinct = *sorted[i - 1] != *sorted[i];
  }
  if (!distinct) throw std::invalid_argument("panel distribution lists a panel twice");
}

namespace {

void check_k(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("panel size k=" + std::to_string(k) + " must satisfy 1 <= k <= n=" +
                                std::to_string(n));
  }
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kBinomialOverflow / a) return kBinomialOverflow;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > kBinomialOverflow - a ? kBinomialOverflow : a + b;
}

// Calls visit(subset) for every k-subset of `pool` in lexicographic order.
template <class Visit>
void for_each_subset(std::span<const std::size_t> pool, std::size_t k, Visit&& visit) {
  const std::size_t n = pool.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> chosen(k);
  while (true) {
    for (std::size_t t = 0; t < k; ++t) chosen[t] = pool[idx[t]];
    visit(std::span<const std::size_t>(chosen));
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t t = pos; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

// Uniform `count`-subset of `pool` (selection sampling keeps pool order).
void sample_into(std::span<const std::size_t> pool, std::size_t count, Rng& rng,
                 std::vector<std::size_t>& out) {
  std::sample(pool.begin(), pool.end(), std::back_inserter(out), count, rng);
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> sorted_taken) {
  std::vector<std::size_t> out;
  out.reserve(n - sorted_taken.size());
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t < sorted_taken.size() && sorted_taken[t] == i) {
      ++t;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

// Fills a partially built panel up to k seats uniformly from the rest.
Panel fill_uniformly(std::vector<std::size_t> taken, std::size_t n, std::size_t k, Rng& rng) {
  std::sort(taken.begin(), taken.end());
  if (taken.size() < k) {
    const auto pool = complement(n, taken);
    sample_into(pool, k - taken.size(), rng, taken);
  }
  return Panel(std::move(taken));
}

}  // namespace

Panel uniform_sample(std::size_t n, std::size_t k, Rng& rng) {
  check_k(n, k);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> out;
  out.reserve(k);
  sample_into(pool, k, rng, out);
  return Panel(std::move(out));
}

PanelDistribution uniform_support(std::size_t n, std::size_t k, std::uint64_t cap) {
  check_k(n, k);
  const std::uint64_t count = binomial_saturating(n, k);
  if (count > cap) {
    throw CapExceeded("uniform support has C(" + std::to_string(n) + "," + std::to_string(k) +
                      ") panels, above the cap of " + std::to_string(cap) + "; use Monte Carlo mode");
  }
  const double p = 1.0 / static_cast<double>(count);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<SupportEntry> support;
  support.reserve(static_cast<std::size_t>(count));
  for_each_subset(pool, k, [&](std::span<const std::size_t> s) {
    support.push_back({Panel(std::vector<std::size_t>(s.begin(), s.end())), p});
  });
  return {k, std::move(support)};
}

NeighborOrder::NeighborOrder(const AgentDistances& agents) : n_(agents.n), order_(agents.n * agents.n) {
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n_); ++si) {
    const auto i = static_cast<std::size_t>(si);
    auto row = order_.begin() + static_cast<std::ptrdiff_t>(i * n_);
    std::iota(row, row + static_cast<std::ptrdiff_t>(n_), 0u);
    std::sort(row, row + static_cast<std::ptrdiff_t>(n_), [&](std::uint32_t a, std::uint32_t b) {
      const double da = agents(i, a), db = agents(i, b);
      return da < db || (da == db && a < b);
    });
  }
}

BallTrace fgc_ball_trace(const NeighborOrder& order, const AgentDistances& agents, std::size_t k) {
  const std::size_t n = agents.n;
  check_k(n, k);
  if (order.size() != n) throw std::invalid_argument("fgc_ball_trace: neighbor order size mismatch");

  BallTrace trace;
  trace.group_size = ceil_div(n, k);
  const std::size_t q = trace.group_size;
  std::vector<char> remaining(n, 1);
  std::size_t left = n;
  std::vector<double> radius(n);

  while (left >= q) {
    // q-th nearest remaining agent of every remaining agent.
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
      const auto i = static_cast<std::size_t>(si);
      if (!remaining[i]) continue;
      const auto row = order.row(i);
      std::size_t seen = 0;
      for (std::uint32_t j : row) {
        if (remaining[j] && ++seen == q) {
          radius[i] = agents(i, j);
          break;
        }
      }
    }
    std::size_t center = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] && (center == n || radius[i] < radius[center])) center = i;
    }

    // Order rows sort by (distance, index): interior agents come first and
    // boundary agents in increasing index.
    std::vector<std::size_t> group;
    group.reserve(q);
    for (std::uint32_t j : order.row(center)) {
      if (!remaining[j]) continue;
      group.push_back(j);
      if (group.size() == q) break;
    }
    for (std::size_t j : group) remaining[j] = 0;
    left -= q;
    std::sort(group.begin(), group.end());
    trace.centers.push_back(center);
    trace.radii.push_back(radius[center]);
    trace.groups.push_back(std::move(group));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (remaining[i]) trace.leftover.push_back(i);
  }
  return trace;
}

BallTrace fgc_ball_trace(const AgentDistances& agents, std::size_t k) {
  return fgc_ball_trace(NeighborOrder(agents), agents, k);
}

BallTrace fgc_ball_trace(const Instance& instance, std::size_t k) {
  return fgc_ball_trace(instance.agents(), k);
}

namespace {

void check_trace(const BallTrace& trace, std::size_t n, std::size_t k) {
  check_k(n, k);
  std::size_t total = trace.leftover.size();
  for (const auto& g : trace.groups) total += g.size();
  if (trace.group_size != ceil_div(n, k) || total != n || trace.groups.size() > k) {
    throw std::invalid_argument("ball trace is inconsistent with n=" + std::to_string(n) +
                                ", k=" + std::to_string(k));
  }
}

}  // namespace

Panel fgc_sample(const BallTrace& trace, std::size_t n, std::size_t k, Rng& rng) {
  check_trace(trace, n, k);
  const std::size_t q = trace.group_size;
  std::vector<std::size_t> taken;
  taken.reserve(k);
  for (const auto& g : trace.groups) {
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    taken.push_back(g[pick(rng)]);
  }
  if (taken.size() < k) {
    // One categorical draw: each leftover agent with probability 1/q, none otherwise.
    std::uniform_int_distribution<std::size_t> slot(0, q - 1);
    const std::size_t u = slot(rng);
    if (u < trace.leftover.size()) taken.push_back(trace.leftover[u]);
  }
  return fill_uniformly(std::move(taken), n, k, rng);
}

Panel fgc_sample(const Instance& instance, std::size_t k, Rng& rng) {
  return fgc_sample(fgc_ball_trace(instance, k), instance.n(), k, rng);
}

Panel fgc_two_stage_sample(const BallTrace& trace, std::size_t n, std::size_t k, Rng& rng) {
  check_trace(trace, n, k);
  const double per_agent = 1.0 / static_cast<double>(trace.group_size);
  std::vector<std::span<const std::size_t>> parts(trace.groups.begin(), trace.groups.end());
  if (!trace.leftover.empty()) parts.emplace_back(trace.leftover);

  // Stage 1: at most one agent per part, each agent with probability 1/q.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> taken;
  taken.reserve(k);
  for (auto part : parts) {
    const double u = unit(rng);
    const auto slot = static_cast<std::size_t>(u / per_agent);
    if (slot < part.size()) taken.push_back(part[slot]);
  }
  // Stage 2.
  return fill_uniformly(std::move(taken), n, k, rng);
}

PanelDistribution fgc_support(const BallTrace& trace, std::size_t n, std::size_t k, std::uint64_t cap) {
  check_trace(trace, n, k);
  const std::size_t q = trace.group_size;
  const std::size_t g = trace.groups.size();
  const std::size_t r = trace.leftover.size();

  std::uint64_t choices = 1;
  for (std::size_t t = 0; t < g; ++t) choices = saturating_mul(choices, q);
  std::uint64_t tail = 1;
  if (g < k) {
    tail = binomial_saturating(n - g, k - g);
    if (r > 0) tail = saturating_add(tail, saturating_mul(r, binomial_saturating(n - g - 1, k - g - 1)));
  }
  const std::uint64_t outcomes = saturating_mul(choices, tail);
  if (outcomes > cap) {
    throw CapExceeded("fgc support enumerates " +
                      (outcomes == kBinomialOverflow ? std::string("more than 2^64") : std::to_string(outcomes)) +
                      " outcomes, above the cap of " + std::to_string(cap) + "; use Monte Carlo mode");
  }

  std::map<std::vector<std::size_t>, double> merged;
  const double group_p = std::pow(1.0 / static_cast<double>(q), static_cast<double>(g));
  std::vector<std::size_t> pick(g, 0);
  std::vector<std::size_t> base;

  auto add_fills = [&](std::vector<std::size_t> fixed, double p) {
    std::sort(fixed.begin(), fixed.end());
    const std::size_t need = k - fixed.size();
    const auto pool = complement(n, fixed);
    const double each = p / static_cast<double>(binomial_saturating(pool.size(), need));
    for_each_subset(pool, need, [&](std::span<const std::size_t> fill) {
      std::vector<std::size_t> panel(fixed);
      panel.insert(panel.end(), fill.begin(), fill.end());
      std::sort(panel.begin(), panel.end());
      merged[std::move(panel)] += each;
    });
  };

  while (true) {
    base.clear();
    for (std::size_t t = 0; t < g; ++t) base.push_back(trace.groups[t][pick[t]]);
    if (g == k) {
      add_fills(base, group_p);
    } else {
      const double leftover_p = 1.0 / static_cast<double>(q);
      for (std::size_t x : trace.leftover) {
        auto with = base;
        with.push_back(x);
        add_fills(std::move(with), group_p * leftover_p);
      }
      add_fills(base, group_p * (static_cast<double>(q - r) / static_cast<double>(q)));
    }
    // Odometer over group choices.
    std::size_t t = g;
    while (t > 0 && pick[t - 1] + 1 == q) pick[--t] = 0;
    if (t == 0) break;
    ++pick[t - 1];
  }

  std::vector<SupportEntry> support;
  support.reserve(merged.size());
  for (auto& [members, p] : merged) support.push_back({Panel(members), p});
  return {k, std::move(support)};
}

PanelDistribution fgc_support(const Instance& instance, std::size_t k, std::uint64_t cap) {
  return fgc_support(fgc_ball_trace(instance, k), instance.n(), k, cap);
}

PanelDistribution fixed_panel_algorithm(const Panel& panel) {
  return {panel.size(), {{panel, 1.0}}};
}

PanelDistribution bad_fair_algorithm(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("bad_fair_algorithm: n must be even and positive");
  const std::size_t half = n / 2;
  std::vector<std::size_t> low(half), high(half);
  std::iota(low.begin(), low.end(), 0);
  std::iota(high.begin(), high.end(), half);
  return {half, {{Panel(std::move(low)), 0.5}, {Panel(std::move(high)), 0.5}}};
}

std::vector<double> inclusion_probabilities(const PanelDistribution& dist, std::size_t n) {
  std::vector<CompensatedSum> acc(n);
  for (const auto& e : dist.support()) {
    for (std::size_t i : e.panel.members()) {
      if (i >= n) throw std::out_of_range("panel member " + std::to_string(i) + " >= n");
      acc[i].add(e.probability);
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].value();
  return out;
}

Panel sample_from(const PanelDistribution& dist, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(dist.size());
  for (const auto& e : dist.support()) weights.push_back(e.probability);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return dist.support()[pick(rng)].panel;
}

PanelSampler uniform_sampler(std::size_t n, std::size_t k) {
  check_k(n, k);
  return [n, k](Rng& rng) { return uniform_sample(n, k, rng); };
}

PanelSampler fgc_sampler(BallTrace trace, std::size_t n, std::size_t k) {
  check_trace(trace, n, k);
  return [trace = std::move(trace), n, k](Rng& rng) { return fgc_sample(trace, n, k, rng); };
}

PanelSampler distribution_sampler(PanelDistribution dist) {
  std::vector<double> cumulative;
  cumulative.reserve(dist.size());
  CompensatedSum acc;
  for (const auto& e : dist.support()) {
    acc.add(e.probability);
    cumulative.push_back(acc.value());
  }
  return [dist = std::move(dist), cumulative = std::move(cumulative)](Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, cumulative.back());
    const double u = unit(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return dist.support()[static_cast<std::size_t>(it - cumulative.begin())].panel;
  };
}

}  // namespace sortition
