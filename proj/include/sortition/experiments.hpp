#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sortition/metric.hpp"
#include "sortition/random.hpp"

namespace sortition {

enum class Algorithm { kUniform, kFgc };

std::string_view to_string(Algorithm algorithm);
/// "uniform" or "fgc"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view text);

struct ColumnSpec {
  std::string name;
  FeatureKind kind;
};
using Schema = std::vector<ColumnSpec>;

/// Parses "name:kind,name:kind,...". Throws std::invalid_argument on a
/// malformed entry or unknown kind.
Schema parse_schema(std::string_view text);

/// Reads a CSV with a header row. Only the schema's columns are kept, in
/// schema order; other columns are ignored. Empty fields and "?" count as
/// missing. Throws ParseError with the row and column of the first problem.
FeatureTable parse_dataset(std::istream& in, const Schema& schema, std::string_view source = "<input>");
FeatureTable load_dataset(const std::string& path, const Schema& schema);

/// Feature metric with every weight drawn uniformly from [0, 1].
MetricSpace sample_metric(const FeatureTable& table, Rng& rng);

struct ExperimentConfig {
  std::string dataset_path;
  Schema schema;
  std::size_t k_min = 1;
  std::size_t k_max = 40;
  std::size_t metrics_per_run = 10;
  std::size_t panels_per_metric = 50;
  std::vector<Algorithm> algorithms = {Algorithm::kUniform, Algorithm::kFgc};
  std::uint64_t seed = 0;
  /// Uniform subsample of this many rows when the dataset is larger.
  std::optional<std::size_t> agent_subsample = 3000;
  /// Round reported ex-post samples to two decimals (expost_distribution only).
  bool round_expost = false;
};

struct ExperimentRow {
  Algorithm algorithm = Algorithm::kUniform;
  std::size_t k = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> samples;  // metric-major, then panel
};

/// mean ± 1.96 s / sqrt(n). Throws std::invalid_argument for fewer than two samples.
std::pair<double, double> ci95(std::span<const double> samples);

/// Throws std::invalid_argument on an invalid configuration.
void validate_config(const ExperimentConfig& config, std::size_t rows);

/// Per algorithm (config order) and k (ascending): SC(c(P)) / SC(c(N)) for
/// panels_per_metric panels on each of metrics_per_run random feature
/// metrics, with the agents doubling as the alternatives. Metric r is drawn
/// from (seed, 0, r) and shared by every algorithm and k. Throws
/// DegenerateOptimum if a metric has optimal social cost 0.
std::vector<ExperimentRow> run_experiment(const FeatureTable& table, const ExperimentConfig& config);
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

/// run_experiment with samples rounded to two decimals when config.round_expost.
std::vector<ExperimentRow> expost_distribution(const FeatureTable& table, const ExperimentConfig& config);
std::vector<ExperimentRow> expost_distribution(const ExperimentConfig& config);

/// Two clusters on features (x: continuous, y: continuous, side: categorical)
/// plus round(colocated_fraction * n) agents sharing one identical far-away
/// profile.
FeatureTable synthetic_two_cluster(std::size_t n, double colocated_fraction, std::uint64_t seed);

/// CSV with header algorithm,k,mean,ci_low,ci_high.
void write_rows_csv(std::ostream& out, std::span<const ExperimentRow> rows);

}  // namespace sortition
