#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sortition {

/// Dense pseudo-metric over `size` points stored row-major. The constructor
/// only checks the shape; use validate_metric to check the metric axioms.
class MetricSpace {
 public:
  MetricSpace() = default;
  MetricSpace(std::size_t size, std::vector<double> dist);

  std::size_t size() const { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * size_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {dist_.data() + i * size_, size_};
  }
  std::span<const double> data() const { return dist_; }

  /// Copy with every distance multiplied by `factor`.
  MetricSpace scaled(double factor) const;

 private:
  std::size_t size_ = 0;
  std::vector<double> dist_;
};

/// Non-owning view of the leading `n` x `n` block of a row-major matrix with
/// row stride `stride`. Agents occupy the leading block of an instance metric.
struct AgentDistances {
  std::span<const double> data;
  std::size_t n = 0;
  std::size_t stride = 0;

  double operator()(std::size_t i, std::size_t j) const { return data[i * stride + j]; }
};

inline AgentDistances leading_block(const MetricSpace& m, std::size_t n) {
  return {m.data(), n, m.size()};
}

enum class ViolationKind { kNonzeroDiagonal, kNegative, kAsymmetry, kTriangle };

struct Violation {
  ViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t via = 0;  // intermediate point, triangle violations only
  double excess = 0.0;  // amount by which the axiom is broken

  bool operator==(const Violation&) const = default;
};

std::string_view to_string(ViolationKind kind);

/// Every pair or triple breaking a pseudo-metric axiom by more than `tol`.
/// Triangle violations are reported once per unordered pair {i, j} with
/// i < j, as (i, j, via) meaning d(i,j) > d(i,via) + d(via,j) + tol.
/// Cost is O(size^3); parallelised over i.
std::vector<Violation> validate_metric(const MetricSpace& m, double tol);

struct Edge {
  std::size_t from;
  std::size_t to;
  double length;
};

/// All-pairs shortest-path metric of an undirected graph (Floyd-Warshall).
/// Throws std::invalid_argument on a negative length or out-of-range endpoint
/// and std::domain_error naming an unreachable pair if the graph is
/// disconnected.
MetricSpace shortest_path_metric(std::size_t n_points, std::span<const Edge> edges);

/// Distances between points on the real line, |x_i - x_j|.
MetricSpace line_metric(std::span<const double> positions);

enum class FeatureKind { kCategorical, kContinuous };

FeatureKind parse_feature_kind(std::string_view text);
std::string_view to_string(FeatureKind kind);

/// One feature column. Categorical values are dictionary codes into `levels`.
struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::kCategorical;
  std::vector<double> values;
  std::vector<std::string> levels;
};

class FeatureTable {
 public:
  /// Throws std::invalid_argument if a column does not have exactly `rows`
  /// values or a continuous column is not finite.
  FeatureTable(std::size_t rows, std::vector<FeatureColumn> columns);

  std::size_t rows() const { return rows_; }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<FeatureColumn>& columns() const { return columns_; }

  /// Table restricted to the given rows, in the given order.
  FeatureTable select_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t rows_;
  std::vector<FeatureColumn> columns_;
};

class FeatureWeights {
 public:
  /// Each weight must lie in [0, 1].
  explicit FeatureWeights(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  std::span<const double> values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Weighted sum of per-feature distances: 0/1 mismatch for categorical
/// features, |a - b| / (max - min) for continuous ones (0 if the column is
/// constant). Throws std::invalid_argument if the weight count mismatches.
MetricSpace metric_from_features(const FeatureTable& table, const FeatureWeights& weights);

}  // namespace sortition
