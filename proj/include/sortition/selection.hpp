#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sortition/metric.hpp"
#include "sortition/random.hpp"

namespace sortition {

class Instance;

/// A set of agents, stored as a strictly increasing index list.
class Panel {
 public:
  Panel() = default;
  /// Sorts the members; throws std::invalid_argument on duplicates.
  explicit Panel(std::vector<std::size_t> members);

  static Panel first(std::size_t k);  // {0, ..., k-1}

  std::span<const std::size_t> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t agent) const;

  auto operator<=>(const Panel&) const = default;

 private:
  std::vector<std::size_t> members_;
};

struct SupportEntry {
  Panel panel;
  double probability;
};

/// Explicit distribution over panels of one size k.
class PanelDistribution {
 public:
  /// Throws std::invalid_argument unless the panels are distinct, all of
  /// size k, every probability is positive and they sum to 1 within 1e-12.
  PanelDistribution(std::size_t k, std::vector<SupportEntry> support);

  std::size_t k() const { return k_; }
  std::span<const SupportEntry> support() const { return support_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::size_t k_;
  std::vector<SupportEntry> support_;
};

/// Partition produced by Fair Greedy Capture's ball-growing phase.
struct BallTrace {
  std::size_t group_size = 0;                  // ceil(n/k)
  std::vector<std::vector<std::size_t>> groups;  // each sorted, size group_size
  std::vector<std::size_t> leftover;           // sorted, size < group_size
  std::vector<std::size_t> centers;
  std::vector<double> radii;

  bool operator==(const BallTrace&) const = default;
};

inline constexpr std::uint64_t kDefaultSupportCap = 1'000'000;

Panel uniform_sample(std::size_t n, std::size_t k, Rng& rng);

/// All C(n,k) panels in lexicographic order, each with probability
/// 1/C(n,k). Throws CapExceeded when C(n,k) > cap.
PanelDistribution uniform_support(std::size_t n, std::size_t k,
                                  std::uint64_t cap = kDefaultSupportCap);

/// Ball-growing phase of Fair Greedy Capture. Each round picks the remaining
/// agent whose ceil(n/k)-th nearest remaining agent (itself included) is
/// closest, lowest index on ties, and captures exactly ceil(n/k) remaining
/// agents from that ball: strictly interior agents first, then boundary
/// agents by lowest index. Stops when fewer than ceil(n/k) agents remain.
BallTrace fgc_ball_trace(const AgentDistances& agents, std::size_t k);
BallTrace fgc_ball_trace(const Instance& instance, std::size_t k);

/// Every agent's neighbours sorted by (distance, index). Independent of k,
/// so callers tracing many panel sizes on one metric build it once.
class NeighborOrder {
 public:
  explicit NeighborOrder(const AgentDistances& agents);

  std::size_t size() const { return n_; }
  std::span<const std::uint32_t> row(std::size_t i) const {
    return {order_.data() + i * n_, n_};
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> order_;
};

BallTrace fgc_ball_trace(const NeighborOrder& order, const AgentDistances& agents, std::size_t k);

/// One agent uniformly from each group; then, if the panel is short, one
/// leftover agent with probability 1/ceil(n/k) each (possibly none); the
/// remaining seats are filled uniformly from the unselected agents.
Panel fgc_sample(const BallTrace& trace, std::size_t n, std::size_t k, Rng& rng);
Panel fgc_sample(const Instance& instance, std::size_t k, Rng& rng);

/// Exact distribution of fgc_sample, with duplicate panels merged.
/// Throws CapExceeded when the number of enumerated outcomes exceeds cap.
PanelDistribution fgc_support(const BallTrace& trace, std::size_t n, std::size_t k,
                              std::uint64_t cap = kDefaultSupportCap);
PanelDistribution fgc_support(const Instance& instance, std::size_t k,
                              std::uint64_t cap = kDefaultSupportCap);

/// Two-stage formulation: the groups plus the leftover form a partition
/// S_1..S_k'; Stage 1 takes at most one agent from each part with
/// per-agent probability 1/ceil(n/k); Stage 2 fills the rest uniformly
/// without replacement from the agents not taken in Stage 1.
Panel fgc_two_stage_sample(const BallTrace& trace, std::size_t n, std::size_t k, Rng& rng);

/// Deterministic algorithm that always returns `panel`.
PanelDistribution fixed_panel_algorithm(const Panel& panel);

/// Fair but poor algorithm for even n: the first half or the second half,
/// each with probability 1/2 (k = n/2).
PanelDistribution bad_fair_algorithm(std::size_t n);

/// Per-agent probability of being on the panel; sums to k.
std::vector<double> inclusion_probabilities(const PanelDistribution& dist, std::size_t n);

/// Draws one panel from an explicit distribution.
Panel sample_from(const PanelDistribution& dist, Rng& rng);

/// Random panel source used by the Monte Carlo estimators.
using PanelSampler = std::function<Panel(Rng&)>;

PanelSampler uniform_sampler(std::size_t n, std::size_t k);
PanelSampler fgc_sampler(BallTrace trace, std::size_t n, std::size_t k);
PanelSampler distribution_sampler(PanelDistribution dist);

}  // namespace sortition
