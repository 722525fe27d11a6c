#pragma once

#include <stdexcept>
#include <string>

namespace sortition {

/// An explicit enumeration would exceed its configured cap. Callers should
/// switch to the Monte Carlo estimators instead.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimal social cost is zero, so every distortion ratio is undefined.
class DegenerateOptimum : public std::domain_error {
 public:
  DegenerateOptimum() : std::domain_error("degenerate optimum: optimal social cost is 0") {}
};

/// Malformed input file (CSV or JSON). The message carries the location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sortition
