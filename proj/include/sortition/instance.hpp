#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "sortition/metric.hpp"
#include "sortition/random.hpp"

namespace sortition {

class Panel;

/// Agents 0..n-1 followed by alternatives n..n+m-1 in one metric space.
/// Alternatives are addressed by their 0-based alternative index a, which
/// maps to metric point n + a.
class Instance {
 public:
  /// Throws std::invalid_argument unless n >= 1, m >= 1 and
  /// metric.size() == n + m.
  Instance(MetricSpace metric, std::size_t n, std::size_t m);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  const MetricSpace& metric() const { return metric_; }

  /// d(agent, alternative)
  double cost(std::size_t agent, std::size_t alt) const { return metric_(agent, n_ + alt); }
  double alt_distance(std::size_t a, std::size_t b) const { return metric_(n_ + a, n_ + b); }
  AgentDistances agents() const { return leading_block(metric_, n_); }

  Instance scaled(double factor) const { return {metric_.scaled(factor), n_, m_}; }

 private:
  MetricSpace metric_;
  std::size_t n_;
  std::size_t m_;
};

/// The 10-agent, 3-alternative graph instance with social costs 101, 39, 49.
/// Agents 1..10 of the drawing are indices 0..9; c1, c2, c3 are 0, 1, 2.
Instance gen_example1();

/// Two alternatives a (index 0) and b (index 1) against which the
/// deterministic panel `panel` picks a. Requires 0 < eps < 1 and |panel| = k.
Instance gen_det_lower(std::size_t n, std::size_t k, double eps, const Panel& panel);

inline constexpr std::uint64_t kDefaultInstanceCap = 100'000;

/// Alternative c (index 0) at 3+eps from everyone, then one alternative c_K
/// per k-subset K in lexicographic order, at 3 from K and 9 from the rest.
/// Agents are pairwise at 6 and alternatives pairwise at 6.
/// Throws CapExceeded if C(n,k) + 1 > cap.
Instance gen_fair_lower(std::size_t n, std::size_t k, double eps,
                        std::uint64_t cap = kDefaultInstanceCap);

/// Alternatives a (0) and b (1); agents 0..k-1 sit on a, the rest on b.
Instance gen_two_block(std::size_t n, std::size_t k);

/// Line: agents 0..n-2 at 0, agent n-1 at 1; alternatives at -delta and 1.
Instance gen_fgc_line_k2(std::size_t n, double delta);

/// Line: agents 0..n/2-1 at 0, the rest at 1; alternatives at -1+delta and 1.
Instance gen_bad_fair_line(std::size_t n, double delta);

/// One draw from the random lower-bound family: agents pairwise at 2, c0
/// (index 0) at 2-4*eps from all, and for i = 1..m-1 an alternative at 1
/// from a uniform n/2-subset S_i and at 3 from the rest. Alternatives are
/// pairwise at distance 2. If `subsets` is non-null it receives S_1..S_{m-1}.
Instance gen_random_family_sample(std::size_t n, std::size_t m, double eps, Rng& rng,
                                  std::vector<std::vector<std::size_t>>* subsets = nullptr);

/// n + m points uniform in [0,1]^dim with Euclidean distances.
Instance gen_random_euclidean(std::size_t n, std::size_t m, std::size_t dim, Rng& rng);

/// Euclidean instance from explicit coordinates (row per point, agents first).
Instance euclidean_instance(std::span<const std::vector<double>> agents,
                            std::span<const std::vector<double>> alternatives);

}  // namespace sortition
