#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sortition/bounds.hpp"
#include "sortition/instance.hpp"

namespace sortition {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr double kFgcExPostBound = 127.0;

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  bool include_k2 = false;       // thm6: add the k = 2 line instance
  std::size_t instances = 500;   // fairness, thm2, thm6
  std::size_t trials = 100'000;  // serfling, per weight vector
};

struct SuiteResult {
  std::string suite;
  std::vector<BoundCheck> checks;
  /// Known violations outside the claimed range; never affect passed().
  std::vector<BoundCheck> expected_failures;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
};

/// anti-concentration, serfling, lemma-19-21, fairness, thm2, thm6
std::span<const std::string_view> suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(std::string_view name, const SuiteOptions& options = {});

/// Instance `index` of the random Euclidean family shared by the fairness,
/// thm2 and thm6 suites: n in [1, 12], m in [1, 8], points in the unit square.
Instance suite_instance(std::uint64_t seed, std::size_t index);

SuiteResult anti_concentration_suite();
SuiteResult lemma_19_21_suite();
SuiteResult serfling_suite(const SuiteOptions& options);
SuiteResult fairness_suite(const SuiteOptions& options);
SuiteResult thm2_suite(const SuiteOptions& options);
SuiteResult thm6_suite(const SuiteOptions& options);

}  // namespace sortition
