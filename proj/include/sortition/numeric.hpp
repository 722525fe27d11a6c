#pragma once

#include <cstdint>
#include <span>

namespace sortition {

/// Neumaier-compensated accumulator. Summing the same sequence always gives
/// the same result, and reordering changes it by far less than 1e-12 relative.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

double compensated_sum(std::span<const double> values);

/// C(n, k) as an unsigned 64-bit integer, or UINT64_MAX when it overflows.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

inline constexpr std::uint64_t kBinomialOverflow = UINT64_MAX;

}  // namespace sortition
