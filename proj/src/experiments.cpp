#include "sortition/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "sortition/errors.hpp"
#include "sortition/numeric.hpp"
#include "sortition/selection.hpp"

namespace sortition {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record. Double quotes may wrap a field; "" inside quotes is
// a literal quote. Unquoted fields are trimmed.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && trim(field).empty()) {
      field.clear();
      quoted = was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double decide_ratio(const MetricSpace& d, std::span<const double> sc, double opt, const Panel& panel,
                    std::vector<double>& scratch) {
  const std::size_t n = d.size();
  scratch.assign(n, 0.0);
  for (std::size_t i : panel.members()) {
    const auto row = d.row(i);
    for (std::size_t j = 0; j < n; ++j) scratch[j] += row[j];
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (scratch[j] < scratch[best]) best = j;
  }
  return sc[best] / opt;
}

FeatureTable subsample(const FeatureTable& table, const ExperimentConfig& config) {
  if (!config.agent_subsample || *config.agent_subsample >= table.rows()) return table;
  if (*config.agent_subsample == 0) throw std::invalid_argument("agent_subsample must be at least 1");
  std::vector<std::size_t> all(table.rows());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> keep;
  Rng rng = derived_rng(config.seed, {2});
  std::sample(all.begin(), all.end(), std::back_inserter(keep), *config.agent_subsample, rng);
  return table.select_rows(keep);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kUniform ? "uniform" : "fgc";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "uniform") return Algorithm::kUniform;
  if (text == "fgc") return Algorithm::kFgc;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (expected uniform or fgc)");
}

Schema parse_schema(std::string_view text) {
  Schema schema;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view entry = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = entry.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw std::invalid_argument("schema entry '" + std::string(entry) + "' is not name:kind");
    }
    schema.push_back({std::string(trim(entry.substr(0, colon))), parse_feature_kind(trim(entry.substr(colon + 1)))});
  }
  if (schema.empty()) throw std::invalid_argument("empty schema");
  return schema;
}

FeatureTable parse_dataset(std::istream& in, const Schema& schema, std::string_view source) {
  const std::string where(source);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(where + ": missing header row");
  const auto header = split_record(line);

  std::vector<std::size_t> position;
  for (const auto& spec : schema) {
    const auto it = std::find(header.begin(), header.end(), spec.name);
    if (it == header.end()) throw ParseError(where + ": column '" + spec.name + "' not found in header");
    position.push_back(static_cast<std::size_t>(it - header.begin()));
  }

  std::vector<FeatureColumn> columns;
  std::vector<std::unordered_map<std::string, double>> codes(schema.size());
  for (const auto& spec : schema) columns.push_back({spec.name, spec.kind, {}, {}});

  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++rows;
    const auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw ParseError(where + ": row " + std::to_string(rows) + " (line " + std::to_string(line_no) + "): expected " +
                       std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const std::string& token = fields[position[c]];
      const std::string loc = where + ": row " + std::to_string(rows) + " (line " + std::to_string(line_no) +
                              "), column '" + schema[c].name + "'";
      if (token.empty() || token == "?") throw ParseError(loc + ": missing value");
      auto& col = columns[c];
      if (col.kind == FeatureKind::kContinuous) {
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
          throw ParseError(loc + ": '" + token + "' is not a finite number");
        }
        col.values.push_back(v);
      } else {
        auto [it, fresh] = codes[c].try_emplace(token, static_cast<double>(col.levels.size()));
        if (fresh) col.levels.push_back(token);
        col.values.push_back(it->second);
      }
    }
  }
  if (rows == 0) throw ParseError(where + ": no data rows");
  return {rows, std::move(columns)};
}

FeatureTable load_dataset(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset '" + path + "'");
  return parse_dataset(in, schema, path);
}

MetricSpace sample_metric(const FeatureTable& table, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(table.column_count());
  for (double& x : w) x = unit(rng);
  return metric_from_features(table, FeatureWeights(std::move(w)));
}

std::pair<double, double> ci95(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("ci95 needs at least two samples");
  const auto count = static_cast<double>(samples.size());
  const double mean = compensated_sum(samples) / count;
  CompensatedSum sq;
  for (double x : samples) sq.add((x - mean) * (x - mean));
  const double half = 1.96 * std::sqrt(sq.value() / (count - 1.0)) / std::sqrt(count);
  return {mean - half, mean + half};
}

void validate_config(const ExperimentConfig& config, std::size_t rows) {
  if (config.k_min < 1) throw std::invalid_argument("k_min must be at least 1");
  if (config.k_max < config.k_min) throw std::invalid_argument("k_max must be at least k_min");
  if (config.k_max > rows) {
    throw std::invalid_argument("k_max=" + std::to_string(config.k_max) + " exceeds the " + std::to_string(rows) +
                                " agents");
  }
  if (config.metrics_per_run < 1 || config.panels_per_metric < 1) {
    throw std::invalid_argument("metrics_per_run and panels_per_metric must be at least 1");
  }
  if (config.algorithms.empty()) throw std::invalid_argument("no algorithms selected");
}

std::vector<ExperimentRow> run_experiment(const FeatureTable& full, const ExperimentConfig& config) {
  const FeatureTable table = subsample(full, config);
  const std::size_t n = table.rows();
  validate_config(config, n);

  const std::size_t n_k = config.k_max - config.k_min + 1;
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t per_cell = config.metrics_per_run * config.panels_per_metric;
  const std::size_t per_metric = n_alg * n_k * config.panels_per_metric;
  std::vector<std::vector<double>> samples(n_alg * n_k, std::vector<double>(per_cell));
  const bool need_fgc =
      std::find(config.algorithms.begin(), config.algorithms.end(), Algorithm::kFgc) != config.algorithms.end();

  for (std::size_t r = 0; r < config.metrics_per_run; ++r) {
    Rng metric_rng = derived_rng(config.seed, {0, r});
    const MetricSpace d = sample_metric(table, metric_rng);

    std::vector<double> sc(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t sj = 0; sj < static_cast<std::ptrdiff_t>(n); ++sj) {
      const auto j = static_cast<std::size_t>(sj);
      sc[j] = compensated_sum(d.row(j));
    }
    const double opt = *std::min_element(sc.begin(), sc.end());
    if (!(opt > 0.0)) throw DegenerateOptimum();

    std::vector<BallTrace> traces;
    if (need_fgc) {
      const AgentDistances agents = leading_block(d, n);
      const NeighborOrder order(agents);
      for (std::size_t kk = 0; kk < n_k; ++kk) traces.push_back(fgc_ball_trace(order, agents, config.k_min + kk));
    }

#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(dynamic, 4)
      for (std::ptrdiff_t st = 0; st < static_cast<std::ptrdiff_t>(per_metric); ++st) {
        const auto task = static_cast<std::size_t>(st);
        const std::size_t p = task % config.panels_per_metric;
        const std::size_t kk = (task / config.panels_per_metric) % n_k;
        const std::size_t a = task / (config.panels_per_metric * n_k);
        const std::size_t k = config.k_min + kk;
        const Algorithm alg = config.algorithms[a];
        Rng rng = derived_rng(config.seed, {1, r, static_cast<std::uint64_t>(alg), k, p});
        const Panel panel = alg == Algorithm::kUniform ? uniform_sample(n, k, rng) : fgc_sample(traces[kk], n, k, rng);
        samples[a * n_k + kk][r * config.panels_per_metric + p] = decide_ratio(d, sc, opt, panel, scratch);
      }
    }
  }

  std::vector<ExperimentRow> rows;
  rows.reserve(n_alg * n_k);
  for (std::size_t a = 0; a < n_alg; ++a) {
    for (std::size_t kk = 0; kk < n_k; ++kk) {
      ExperimentRow row;
      row.algorithm = config.algorithms[a];
      row.k = config.k_min + kk;
      row.samples = std::move(samples[a * n_k + kk]);
      row.mean = compensated_sum(row.samples) / static_cast<double>(row.samples.size());
      if (row.samples.size() >= 2) {
        std::tie(row.ci_low, row.ci_high) = ci95(row.samples);
      } else {
        row.ci_low = row.ci_high = row.mean;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  return run_experiment(load_dataset(config.dataset_path, config.schema), config);
}

std::vector<ExperimentRow> expost_distribution(const FeatureTable& table, const ExperimentConfig& config) {
  auto rows = run_experiment(table, config);
  if (config.round_expost) {
    for (auto& row : rows) {
      for (double& x : row.samples) x = std::round(x * 100.0) / 100.0;
    }
  }
  return rows;
}

std::vector<ExperimentRow> expost_distribution(const ExperimentConfig& config) {
  return expost_distribution(load_dataset(config.dataset_path, config.schema), config);
}

FeatureTable synthetic_two_cluster(std::size_t n, double colocated_fraction, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("synthetic_two_cluster: need n >= 2");
  if (!(colocated_fraction >= 0.0 && colocated_fraction < 1.0)) {
    throw std::invalid_argument("synthetic_two_cluster: colocated_fraction must lie in [0, 1)");
  }
  const auto colocated = static_cast<std::size_t>(std::llround(colocated_fraction * static_cast<double>(n)));
  const std::size_t spread = n - colocated;
  Rng rng = derived_rng(seed, {});
  std::normal_distribution<double> noise(0.0, 0.15);

  FeatureColumn x{"x", FeatureKind::kContinuous, {}, {}};
  FeatureColumn y{"y", FeatureKind::kContinuous, {}, {}};
  FeatureColumn side{"side", FeatureKind::kCategorical, {}, {"left", "right", "far"}};
  for (std::size_t i = 0; i < spread; ++i) {
    const bool right = i >= spread / 2;
    const double cx = right ? 1.0 : 0.0;
    x.values.push_back(cx + noise(rng));
    y.values.push_back(cx + noise(rng));
    side.values.push_back(right ? 1.0 : 0.0);
  }
  for (std::size_t i = 0; i < colocated; ++i) {
    x.values.push_back(3.0);
    y.values.push_back(-2.0);
    side.values.push_back(2.0);
  }
  return {n, {std::move(x), std::move(y), std::move(side)}};
}

void write_rows_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "algorithm,k,mean,ci_low,ci_high\n";
  for (const auto& row : rows) {
    out << to_string(row.algorithm) << ',' << row.k << ',' << format_double(row.mean) << ','
        << format_double(row.ci_low) << ',' << format_double(row.ci_high) << '\n';
  }
}

}  // namespace sortition
