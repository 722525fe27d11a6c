#include "sortition/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sortition/errors.hpp"
#include "sortition/numeric.hpp"
#include "sortition/selection.hpp"

namespace sortition {

Instance::Instance(MetricSpace metric, std::size_t n, std::size_t m)
    : metric_(std::move(metric)), n_(n), m_(m) {
  if (n_ < 1 || m_ < 1) throw std::invalid_argument("instance needs at least one agent and one alternative");
  if (metric_.size() != n_ + m_) {
    throw std::invalid_argument("instance metric has " + std::to_string(metric_.size()) +
                                " points, expected n + m = " + std::to_string(n_ + m_));
  }
}

namespace {

// Row-major builder for a symmetric matrix over n + m points.
class DistanceBuilder {
 public:
  explicit DistanceBuilder(std::size_t size) : size_(size), d_(size * size, 0.0) {}

  void set(std::size_t i, std::size_t j, double v) {
    d_[i * size_ + j] = v;
    d_[j * size_ + i] = v;
  }
  MetricSpace build() && { return {size_, std::move(d_)}; }

 private:
  std::size_t size_;
  std::vector<double> d_;
};

}  // namespace

Instance gen_example1() {
  // Agents 0..9, alternatives c1 = 10, c2 = 11, c3 = 12 as graph vertices.
  // Co-located points are joined by zero-length edges.
  constexpr std::size_t c1 = 10, c2 = 11, c3 = 12;
  const std::vector<Edge> edges = {
      {0, 1, 0.0},  {0, c1, 0.0},  {2, 3, 0.0},  {5, 6, 0.0}, {8, 9, 0.0},  // co-located
      {0, 2, 10.0},                                                        // {1,2,c1} - {3,4}
      {2, c2, 1.0},                                                        // {3,4} - c2
      {c2, 4, 1.0},                                                        // c2 - 5
      {c2, 7, 2.0},                                                        // c2 - 8
      {5, 7, 1.0},                                                         // {6,7} - 8
      {7, 8, 1.0},                                                         // 8 - {9,10}
      {7, c3, 1.0},                                                        // 8 - c3
  };
  return {shortest_path_metric(13, edges), 10, 3};
}

Instance gen_det_lower(std::size_t n, std::size_t k, double eps, const Panel& panel) {
  if (k < 1 || k > n) throw std::invalid_argument("gen_det_lower: need 1 <= k <= n");
  if (panel.size() != k) throw std::invalid_argument("gen_det_lower: panel must have size k");
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("gen_det_lower: need 0 < eps < 1");
  if (panel.members().back() >= n) throw std::invalid_argument("gen_det_lower: panel member out of range");

  const std::size_t a = n, b = n + 1;
  DistanceBuilder d(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, 2.0);
    const bool on_panel = panel.contains(i);
    d.set(i, a, on_panel ? 3.0 - eps : 5.0 - eps);
    d.set(i, b, on_panel ? 3.0 : 1.0);
  }
  d.set(a, b, 4.0 - eps);
  return {std::move(d).build(), n, 2};
}

Instance gen_fair_lower(std::size_t n, std::size_t k, double eps, std::uint64_t cap) {
  if (k < 1 || k > n) throw std::invalid_argument("gen_fair_lower: need 1 <= k <= n");
  // d(i,c) = 3+eps must not exceed d(i,c_K) + d(c_K,c) = 9.
  if (!(eps > 0.0) || eps > 6.0) throw std::invalid_argument("gen_fair_lower: need 0 < eps <= 6");
  const std::uint64_t subsets = binomial_saturating(n, k);
  if (subsets == kBinomialOverflow || subsets + 1 > cap) {
    throw CapExceeded("gen_fair_lower: C(" + std::to_string(n) + "," + std::to_string(k) +
                      ") + 1 alternatives exceeds the cap of " + std::to_string(cap));
  }
  const std::size_t m = static_cast<std::size_t>(subsets) + 1;
  DistanceBuilder d(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, 6.0);
    d.set(i, n, 3.0 + eps);
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) d.set(n + a, n + b, 6.0);
  }

  // Lexicographic enumeration of k-subsets.
  std::vector<std::size_t> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<bool> member(n);
  for (std::size_t alt = 1; alt < m; ++alt) {
    std::fill(member.begin(), member.end(), false);
    for (std::size_t s : subset) member[s] = true;
    for (std::size_t i = 0; i < n; ++i) d.set(i, n + alt, member[i] ? 3.0 : 9.0);

    std::size_t pos = k;
    while (pos > 0 && subset[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t t = pos; t < k; ++t) subset[t] = subset[t - 1] + 1;
  }
  return {std::move(d).build(), n, m};
}

Instance gen_two_block(std::size_t n, std::size_t k) {
  if (k < 1 || k >= n) throw std::invalid_argument("gen_two_block: need 1 <= k < n");
  const std::size_t a = n, b = n + 1;
  DistanceBuilder d(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const bool near_a = i < k;
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, near_a == (j < k) ? 0.0 : 1.0);
    d.set(i, a, near_a ? 0.0 : 1.0);
    d.set(i, b, near_a ? 1.0 : 0.0);
  }
  d.set(a, b, 1.0);
  return {std::move(d).build(), n, 2};
}

Instance gen_fgc_line_k2(std::size_t n, double delta) {
  if (n < 3) throw std::invalid_argument("gen_fgc_line_k2: need n >= 3");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gen_fgc_line_k2: need 0 < delta < 1");
  std::vector<double> pos(n, 0.0);
  pos[n - 1] = 1.0;
  pos.push_back(-delta);
  pos.push_back(1.0);
  return {line_metric(pos), n, 2};
}

Instance gen_bad_fair_line(std::size_t n, double delta) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_bad_fair_line: n must be even and positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gen_bad_fair_line: need 0 < delta < 1");
  std::vector<double> pos(n, 0.0);
  std::fill(pos.begin() + static_cast<std::ptrdiff_t>(n / 2), pos.end(), 1.0);
  pos.push_back(-1.0 + delta);
  pos.push_back(1.0);
  return {line_metric(pos), n, 2};
}

Instance gen_random_family_sample(std::size_t n, std::size_t m, double eps, Rng& rng,
                                  std::vector<std::vector<std::size_t>>* subsets) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_random_family_sample: n must be even and positive");
  if (m < 1) throw std::invalid_argument("gen_random_family_sample: need m >= 1");
  if (!(eps > 0.0) || eps > 1.0 / 30.0) throw std::invalid_argument("gen_random_family_sample: need 0 < eps <= 1/30");

  DistanceBuilder d(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, 2.0);
    d.set(i, n, 2.0 - 4.0 * eps);
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) d.set(n + a, n + b, 2.0);
  }
  if (subsets) subsets->clear();

  std::vector<std::size_t> perm(n);
  const std::size_t half = n / 2;
  for (std::size_t alt = 1; alt < m; ++alt) {
    std::iota(perm.begin(), perm.end(), 0);
    // Partial Fisher-Yates: the first n/2 slots become a uniform subset.
    for (std::size_t t = 0; t < half; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, n - 1);
      std::swap(perm[t], perm[pick(rng)]);
    }
    std::vector<bool> in_subset(n, false);
    for (std::size_t t = 0; t < half; ++t) in_subset[perm[t]] = true;
    for (std::size_t i = 0; i < n; ++i) d.set(i, n + alt, in_subset[i] ? 1.0 : 3.0);
    if (subsets) {
      std::vector<std::size_t> s(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
      std::sort(s.begin(), s.end());
      subsets->push_back(std::move(s));
    }
  }
  return {std::move(d).build(), n, m};
}

Instance euclidean_instance(std::span<const std::vector<double>> agents,
                            std::span<const std::vector<double>> alternatives) {
  std::vector<const std::vector<double>*> pts;
  for (const auto& p : agents) pts.push_back(&p);
  for (const auto& p : alternatives) pts.push_back(&p);
  const std::size_t size = pts.size();
  DistanceBuilder d(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      const auto& p = *pts[i];
      const auto& q = *pts[j];
      if (p.size() != q.size()) throw std::invalid_argument("euclidean_instance: dimension mismatch");
      double s = 0.0;
      for (std::size_t c = 0; c < p.size(); ++c) s += (p[c] - q[c]) * (p[c] - q[c]);
      d.set(i, j, std::sqrt(s));
    }
  }
  return {std::move(d).build(), agents.size(), alternatives.size()};
}

Instance gen_random_euclidean(std::size_t n, std::size_t m, std::size_t dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("gen_random_euclidean: need dim >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](std::size_t count) {
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (auto& p : pts) {
      for (double& x : p) x = unit(rng);
    }
    return pts;
  };
  const auto agents = draw(n);
  const auto alts = draw(m);
  return euclidean_instance(agents, alts);
}

}  // namespace sortition
