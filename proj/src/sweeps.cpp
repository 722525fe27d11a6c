#include "sortition/sweeps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "sortition/distortion.hpp"
#include "sortition/selection.hpp"

namespace sortition {
namespace {

constexpr std::array<std::string_view, 6> kSuites = {"anti-concentration", "serfling", "lemma-19-21",
                                                     "fairness",           "thm2",     "thm6"};

constexpr std::size_t kChunk = 4096;

double as_double(std::size_t x) { return static_cast<double>(x); }

}  // namespace

std::size_t SuiteResult::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.holds; }));
}

std::span<const std::string_view> suite_names() { return kSuites; }

Instance suite_instance(std::uint64_t seed, std::size_t index) {
  Rng rng = derived_rng(seed, {index});
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
  return gen_random_euclidean(n, m, 2, rng);
}

SuiteResult anti_concentration_suite() {
  SuiteResult out{"anti-concentration", {}, {}};
  for (std::size_t n = 20; n <= 200; n += 2) {
    for (std::size_t k = 10; k <= n / 2; ++k) {
      for (std::size_t l = (k + 1) / 2; 3 * l <= 2 * k; ++l) {
        const double lower = anti_concentration_lower(k, l);
        const double pmf = hypergeom_pmf(n, n / 2, k, l);
        out.checks.push_back(make_check("anti-concentration", lower, pmf,
                                        {{"n", as_double(n)}, {"k", as_double(k)}, {"l", as_double(l)}}));
      }
    }
  }
  return out;
}

SuiteResult lemma_19_21_suite() {
  SuiteResult out{"lemma-19-21", {}, {}};
  for (std::size_t k = 3; k <= 60; ++k) {
    for (std::size_t n = k; n <= 600; ++n) out.checks.push_back(lemma_19_21_check(n, k));
  }
  return out;
}

SuiteResult serfling_suite(const SuiteOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("serfling suite needs at least one trial");
  SuiteResult out{"serfling", {}, {}};
  constexpr std::size_t kVectors = 20;
  constexpr std::array<double, 3> kQuartiles = {0.25, 0.5, 0.75};

  for (std::size_t v = 0; v < kVectors; ++v) {
    Rng rng = derived_rng(options.seed, {v, 0});
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    std::vector<double> values(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& x : values) x = unit(rng);

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double alpha = *lo, beta = *hi;
    double total = 0.0;
    for (double x : values) total += x;
    const double mean_x = as_double(k) * total / as_double(n);
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double top = 0.0;
    for (std::size_t i = 0; i < k; ++i) top += sorted[i];
    const double max_dev = top - mean_x;

    std::array<double, 3> t{};
    for (std::size_t q = 0; q < t.size(); ++q) t[q] = kQuartiles[q] * max_dev;

    const std::size_t chunks = (options.trials + kChunk - 1) / kChunk;
    std::vector<std::array<std::size_t, 3>> hits(chunks, {0, 0, 0});
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t sc = 0; sc < static_cast<std::ptrdiff_t>(chunks); ++sc) {
      const auto c = static_cast<std::size_t>(sc);
      Rng crng = derived_rng(options.seed, {v, 1 + c});
      auto pool = values;
      const std::size_t end = std::min(options.trials, (c + 1) * kChunk);
      for (std::size_t trial = c * kChunk; trial < end; ++trial) {
        double x = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(crng);
          std::swap(pool[i], pool[j]);
          x += pool[i];
        }
        for (std::size_t q = 0; q < t.size(); ++q) {
          if (x - mean_x >= t[q]) ++hits[c][q];
        }
      }
    }

    for (std::size_t q = 0; q < t.size(); ++q) {
      std::size_t count = 0;
      for (const auto& h : hits) count += h[q];
      const double freq = as_double(count) / as_double(options.trials);
      const double bound = serfling_tail(t[q], k, alpha, beta);
      const double sigma = std::sqrt(bound * (1.0 - bound) / as_double(options.trials));
      out.checks.push_back(make_check("serfling", freq, bound + 3.0 * sigma,
                                      {{"vector", as_double(v)},
                                       {"n", as_double(n)},
                                       {"k", as_double(k)},
                                       {"t", t[q]},
                                       {"bound", bound},
                                       {"trials", as_double(options.trials)}}));
    }
  }
  return out;
}

SuiteResult fairness_suite(const SuiteOptions& options) {
  SuiteResult out{"fairness", {}, {}};
  for (std::size_t idx = 0; idx < options.instances; ++idx) {
    const Instance inst = suite_instance(options.seed, idx);
    const std::size_t n = inst.n();
    for (std::size_t k = 1; k <= n; ++k) {
      const BallTrace trace = fgc_ball_trace(inst, k);
      const auto pi = inclusion_probabilities(fgc_support(trace, n, k), n);
      const double target = as_double(k) / as_double(n);
      double worst = 0.0;
      for (double p : pi) worst = std::max(worst, std::abs(p - target));
      out.checks.push_back(
          make_check("fgc-inclusion", worst, 1e-9,
                                       {{"instance", as_double(idx)},
                                        {"n", as_double(n)},
                                        {"k", as_double(k)},
                                        {"leftover", as_double(trace.leftover.size())}}));
    }
  }
  return out;
}

SuiteResult thm2_suite(const SuiteOptions& options) {
  SuiteResult out{"thm2", {}, {}};
  for (std::size_t idx = 0; idx < options.instances; ++idx) {
    const Instance inst = suite_instance(options.seed, idx);
    const std::size_t n = inst.n();
    for (std::size_t k = 1; k <= n; ++k) {
      const double bound = fair_upper_bound(n, k) + 1e-9;
      const std::map<std::string, double> params = {
          {"instance", as_double(idx)}, {"n", as_double(n)}, {"m", as_double(inst.m())}, {"k", as_double(k)}};
      out.checks.push_back(make_check("uniform-ex-ante", ex_ante_exact(inst, uniform_support(n, k)).ex_ante, bound, params));
      out.checks.push_back(make_check("fgc-ex-ante", ex_ante_exact(inst, fgc_support(inst, k)).ex_ante, bound, params));
    }
  }
  return out;
}

SuiteResult thm6_suite(const SuiteOptions& options) {
  SuiteResult out{"thm6", {}, {}};
  auto check = [&](const Instance& inst, std::size_t k, std::map<std::string, double> params) {
    params["n"] = as_double(inst.n());
    params["k"] = as_double(k);
    return make_check("fgc-ex-post", ex_post_exact(inst, fgc_support(inst, k)), kFgcExPostBound, std::move(params));
  };
  for (std::size_t idx = 0; idx < options.instances; ++idx) {
    const Instance inst = suite_instance(options.seed, idx);
    for (std::size_t k = 3; k <= inst.n(); ++k) out.checks.push_back(check(inst, k, {{"instance", as_double(idx)}}));
  }
  for (std::size_t n : {10, 20}) {
    for (std::size_t k = 3; k < n; ++k) out.checks.push_back(check(gen_two_block(n, k), k, {{"two_block", 1.0}}));
  }
  // Larger lines or panels exceed the default support cap.
  for (auto [n, k_max] : {std::pair<std::size_t, std::size_t>{20, 10}, {50, 5}}) {
    for (double delta : {0.1, 0.001}) {
      const Instance inst = gen_fgc_line_k2(n, delta);
      for (std::size_t k = 3; k <= k_max; ++k) out.checks.push_back(check(inst, k, {{"line", 1.0}, {"delta", delta}}));
    }
  }
  if (options.include_k2) {
    const double delta = 0.001;
    out.expected_failures.push_back(check(gen_fgc_line_k2(200, delta), 2, {{"line", 1.0}, {"delta", delta}}));
  }
  return out;
}

SuiteResult run_suite(std::string_view name, const SuiteOptions& options) {
  if (name == "anti-concentration") return anti_concentration_suite();
  if (name == "serfling") return serfling_suite(options);
  if (name == "lemma-19-21") return lemma_19_21_suite();
  if (name == "fairness") return fairness_suite(options);
  if (name == "thm2") return thm2_suite(options);
  if (name == "thm6") return thm6_suite(options);
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

}  // namespace sortition
