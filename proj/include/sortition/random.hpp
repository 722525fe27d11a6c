#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sortition {

using Rng = std::mt19937_64;

/// Mixes a base seed with a sequence of indices (trial, metric, panel, ...)
/// into an independent stream seed. Parallel loops seed each iteration from
/// its indices so results do not depend on thread count or schedule.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices);

inline Rng derived_rng(std::uint64_t base, std::initializer_list<std::uint64_t> indices) {
  return Rng(derive_seed(base, indices));
}

}  // namespace sortition
