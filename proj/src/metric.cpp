#include "sortition/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sortition {

MetricSpace::MetricSpace(std::size_t size, std::vector<double> dist)
    : size_(size), dist_(std::move(dist)) {
  if (dist_.size() != size_ * size_) {
    throw std::invalid_argument("metric: expected " + std::to_string(size_ * size_) +
                                " entries, got " + std::to_string(dist_.size()));
  }
}

MetricSpace MetricSpace::scaled(double factor) const {
  std::vector<double> out(dist_);
  for (double& d : out) d *= factor;
  return {size_, std::move(out)};
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNonzeroDiagonal: return "nonzero-diagonal";
    case ViolationKind::kNegative: return "negative";
    case ViolationKind::kAsymmetry: return "asymmetry";
    case ViolationKind::kTriangle: return "triangle";
  }
  return "unknown";
}

std::vector<Violation> validate_metric(const MetricSpace& m, double tol) {
  const std::size_t size = m.size();
  std::vector<std::vector<Violation>> per_row(size);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(size); ++si) {
    const auto i = static_cast<std::size_t>(si);
    auto& out = per_row[i];
    if (std::abs(m(i, i)) > tol) out.push_back({ViolationKind::kNonzeroDiagonal, i, i, 0, std::abs(m(i, i))});
    for (std::size_t j = 0; j < size; ++j) {
      if (j != i && m(i, j) < -tol) out.push_back({ViolationKind::kNegative, i, j, 0, -m(i, j)});
    }
    for (std::size_t j = i + 1; j < size; ++j) {
      const double asym = std::abs(m(i, j) - m(j, i));
      if (asym > tol) out.push_back({ViolationKind::kAsymmetry, i, j, 0, asym});
      const double direct = m(i, j);
      for (std::size_t via = 0; via < size; ++via) {
        if (via == i || via == j) continue;
        const double excess = direct - (m(i, via) + m(via, j));
        if (excess > tol) out.push_back({ViolationKind::kTriangle, i, j, via, excess});
      }
    }
  }

  std::vector<Violation> all;
  for (auto& row : per_row) all.insert(all.end(), row.begin(), row.end());
  return all;
}

MetricSpace shortest_path_metric(std::size_t n_points, std::span<const Edge> edges) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n_points * n_points, kInf);
  for (std::size_t i = 0; i < n_points; ++i) d[i * n_points + i] = 0.0;
  for (const Edge& e : edges) {
    if (e.from >= n_points || e.to >= n_points) {
      throw std::invalid_argument("shortest_path_metric: edge endpoint out of range");
    }
    if (!(e.length >= 0.0) || !std::isfinite(e.length)) {
      throw std::invalid_argument("shortest_path_metric: edge lengths must be finite and nonnegative");
    }
    double& a = d[e.from * n_points + e.to];
    double& b = d[e.to * n_points + e.from];
    a = std::min(a, e.length);
    b = std::min(b, e.length);
  }

  for (std::size_t via = 0; via < n_points; ++via) {
    const double* via_row = d.data() + via * n_points;
    // Row `via` is not modified during its own pass since d(via,via) = 0.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n_points); ++si) {
      const auto i = static_cast<std::size_t>(si);
      double* row = d.data() + i * n_points;
      const double to_via = row[via];
      if (to_via == kInf) continue;
      for (std::size_t j = 0; j < n_points; ++j) {
        const double cand = to_via + via_row[j];
        if (cand < row[j]) row[j] = cand;
      }
    }
  }

  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t j = i + 1; j < n_points; ++j) {
      if (d[i * n_points + j] == kInf) {
        throw std::domain_error("shortest_path_metric: graph is disconnected; no path between " +
                                std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
  return {n_points, std::move(d)};
}

MetricSpace line_metric(std::span<const double> positions) {
  const std::size_t n = positions.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(positions[i] - positions[j]);
  }
  return {n, std::move(d)};
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "categorical") return FeatureKind::kCategorical;
  if (text == "continuous") return FeatureKind::kContinuous;
  throw std::invalid_argument("unknown column kind '" + std::string(text) +
                              "' (expected categorical or continuous)");
}

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kCategorical ? "categorical" : "continuous";
}

FeatureTable::FeatureTable(std::size_t rows, std::vector<FeatureColumn> columns)
    : rows_(rows), columns_(std::move(columns)) {
  for (const auto& col : columns_) {
    if (col.values.size() != rows_) {
      throw std::invalid_argument("feature column '" + col.name + "' has " +
                                  std::to_string(col.values.size()) + " values, expected " +
                                  std::to_string(rows_));
    }
    for (double v : col.values) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("feature column '" + col.name + "' has a non-finite value");
      }
    }
  }
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> rows) const {
  std::vector<FeatureColumn> out;
  out.reserve(columns_.size());
  for (const auto& col : columns_) {
    FeatureColumn c{col.name, col.kind, {}, col.levels};
    c.values.reserve(rows.size());
    for (std::size_t r : rows) c.values.push_back(col.values.at(r));
    out.push_back(std::move(c));
  }
  return {rows.size(), std::move(out)};
}

FeatureWeights::FeatureWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("feature weights must lie in [0, 1]");
  }
}

MetricSpace metric_from_features(const FeatureTable& table, const FeatureWeights& weights) {
  const auto& cols = table.columns();
  if (weights.size() != cols.size()) {
    throw std::invalid_argument("metric_from_features: " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(cols.size()) + " columns");
  }
  // Per-column max pairwise difference for continuous columns.
  std::vector<double> span(cols.size(), 0.0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].kind != FeatureKind::kContinuous || cols[c].values.empty()) continue;
    const auto [lo, hi] = std::minmax_element(cols[c].values.begin(), cols[c].values.end());
    span[c] = *hi - *lo;
  }

  const std::size_t n = table.rows();
  const auto w = weights.values();
  std::vector<double> d(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = i + 1; j < n; ++j) {
      double total = 0.0;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const double a = cols[c].values[i];
        const double b = cols[c].values[j];
        double per = 0.0;
        if (cols[c].kind == FeatureKind::kCategorical) {
          per = a == b ? 0.0 : 1.0;
        } else if (span[c] > 0.0) {
          per = std::abs(a - b) / span[c];
        }
        total += w[c] * per;
      }
      d[i * n + j] = total;
      d[j * n + i] = total;
    }
  }
  return {n, std::move(d)};
}

}  // namespace sortition
