#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sortition/bounds.hpp"
#include "sortition/distortion.hpp"
#include "sortition/errors.hpp"
#include "sortition/experiments.hpp"
#include "sortition/instance.hpp"
#include "sortition/io.hpp"
#include "sortition/selection.hpp"
#include "sortition/sweeps.hpp"

using namespace sortition;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Returns the explicit seed, or announces and returns the default one.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::cerr << "using default seed " << kDefaultSeed << '\n';
  return kDefaultSeed;
}

Instance read_instance(const std::string& path) {
  if (path == "-") {
    try {
      return instance_from_json(Json::parse(std::cin));
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("<stdin>: ") + e.what());
    }
  }
  return load_instance(path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

// ---- validate ---------------------------------------------------------------

struct ValidateArgs {
  std::string instance;
  double tol = 1e-9;
  bool json = false;
};

int cmd_validate(const ValidateArgs& a) {
  const Instance inst = read_instance(a.instance);
  const auto violations = validate_metric(inst.metric(), a.tol);
  if (a.json) {
    Json out = Json::array();
    for (const auto& v : violations) {
      out.push_back({{"kind", to_string(v.kind)}, {"i", v.i}, {"j", v.j}, {"via", v.via}, {"excess", v.excess}});
    }
    std::cout << out.dump(2) << '\n';
  } else if (violations.empty()) {
    std::cout << "valid pseudo-metric (" << inst.metric().size() << " points)\n";
  } else {
    for (const auto& v : violations) {
      std::printf("%-16s i=%zu j=%zu via=%zu excess=%.6g\n", std::string(to_string(v.kind)).c_str(), v.i, v.j, v.via,
                  v.excess);
    }
  }
  return violations.empty() ? 0 : kExitCheckFailed;
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string family;
  std::size_t n = 10;
  std::size_t k = 2;
  std::size_t m = 10;
  std::size_t dim = 2;
  double eps = 0.1;
  double delta = 0.01;
  std::vector<std::size_t> panel;
  std::uint64_t cap = kDefaultInstanceCap;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  std::optional<Instance> inst;
  if (a.family == "example1") {
    inst = gen_example1();
  } else if (a.family == "det-lower") {
    const Panel panel = a.panel.empty() ? Panel::first(a.k) : Panel(a.panel);
    inst = gen_det_lower(a.n, panel.size(), a.eps, panel);
  } else if (a.family == "fair-lower") {
    inst = gen_fair_lower(a.n, a.k, a.eps, a.cap);
  } else if (a.family == "two-block") {
    inst = gen_two_block(a.n, a.k);
  } else if (a.family == "fgc-line-k2") {
    inst = gen_fgc_line_k2(a.n, a.delta);
  } else if (a.family == "bad-fair-line") {
    inst = gen_bad_fair_line(a.n, a.delta);
  } else if (a.family == "random-family") {
    Rng rng(resolve_seed(a.seed));
    inst = gen_random_family_sample(a.n, a.m, a.eps, rng);
  } else {
    Rng rng(resolve_seed(a.seed));
    inst = gen_random_euclidean(a.n, a.m, a.dim, rng);
  }
  emit(to_json(*inst).dump() + "\n", a.out);
  return 0;
}

// ---- distortion -------------------------------------------------------------

struct DistortionArgs {
  std::string instance;
  std::string algorithm = "uniform";
  std::size_t k = 1;
  std::string mode = "exact";
  std::size_t trials = 100'000;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> panel;
  std::uint64_t cap = kDefaultSupportCap;
  bool json = false;
};

void print_report(const DistortionReport& r) {
  std::printf("%-12s %18s %12s\n", "alternative", "social_cost", "win_prob");
  for (std::size_t a = 0; a < r.social_costs.size(); ++a) {
    std::printf("%-12zu %18.10g %12.10f%s\n", a, r.social_costs[a], r.win_prob[a],
                a == r.optimal_alternative ? "  (optimal)" : "");
  }
  std::printf("ex_ante  %.12g", r.ex_ante);
  if (r.method == EstimateMethod::kMonteCarlo) std::printf("  (+/- %.3g, %zu trials)", r.ci_halfwidth, r.trials);
  std::printf("\nex_post  %.12g%s\n", r.ex_post, r.ex_post_is_lower_bound ? "  (lower bound: largest observed)" : "");
}

int cmd_distortion(const DistortionArgs& a) {
  const Instance inst = read_instance(a.instance);
  const std::size_t n = inst.n();
  DistortionReport report;
  if (a.mode == "exact") {
    std::optional<PanelDistribution> dist;
    if (a.algorithm == "uniform") {
      dist = uniform_support(n, a.k, a.cap);
    } else if (a.algorithm == "fgc") {
      dist = fgc_support(inst, a.k, a.cap);
    } else if (a.algorithm == "fixed") {
      dist = fixed_panel_algorithm(a.panel.empty() ? Panel::first(a.k) : Panel(a.panel));
    } else {
      dist = bad_fair_algorithm(n);
    }
    report = ex_ante_exact(inst, *dist);
  } else {
    const std::uint64_t seed = resolve_seed(a.seed);
    PanelSampler sampler;
    if (a.algorithm == "uniform") {
      sampler = uniform_sampler(n, a.k);
    } else if (a.algorithm == "fgc") {
      sampler = fgc_sampler(fgc_ball_trace(inst, a.k), n, a.k);
    } else if (a.algorithm == "fixed") {
      sampler = distribution_sampler(fixed_panel_algorithm(a.panel.empty() ? Panel::first(a.k) : Panel(a.panel)));
    } else {
      sampler = distribution_sampler(bad_fair_algorithm(n));
    }
    report = ex_ante_mc(inst, sampler, a.trials, seed);
  }
  if (a.json) {
    std::cout << to_json(report).dump(2) << '\n';
  } else {
    print_report(report);
  }
  return 0;
}

// ---- fgc-trace --------------------------------------------------------------

struct TraceArgs {
  std::string instance;
  std::size_t k = 1;
  bool json = false;
};

int cmd_fgc_trace(const TraceArgs& a) {
  const Instance inst = read_instance(a.instance);
  const BallTrace trace = fgc_ball_trace(inst, a.k);
  if (a.json) {
    std::cout << to_json(trace).dump(2) << '\n';
    return 0;
  }
  std::printf("group size %zu\n", trace.group_size);
  for (std::size_t g = 0; g < trace.groups.size(); ++g) {
    std::printf("group %zu  center %zu  radius %.10g  members", g, trace.centers[g], trace.radii[g]);
    for (std::size_t i : trace.groups[g]) std::printf(" %zu", i);
    std::printf("\n");
  }
  std::printf("leftover");
  for (std::size_t i : trace.leftover) std::printf(" %zu", i);
  std::printf("\n");
  return 0;
}

// ---- bounds -----------------------------------------------------------------

struct BoundsArgs {
  std::string suite;
  bool include_k2 = false;
  std::optional<std::uint64_t> seed;
  std::size_t instances = 500;
  std::size_t trials = 100'000;
  std::size_t show = 20;
  bool json = false;
};

std::string describe(const BoundCheck& c) {
  std::ostringstream s;
  s.precision(10);
  s << c.name << "  lhs=" << c.lhs << "  rhs=" << c.rhs;
  for (const auto& [key, value] : c.params) s << "  " << key << '=' << value;
  return s.str();
}

int cmd_bounds(const BoundsArgs& a) {
  SuiteOptions opts;
  opts.include_k2 = a.include_k2;
  opts.instances = a.instances;
  opts.trials = a.trials;
  if (a.suite == "serfling" || a.suite == "fairness" || a.suite == "thm2" || a.suite == "thm6") {
    opts.seed = resolve_seed(a.seed);
  }
  const SuiteResult result = run_suite(a.suite, opts);

  if (a.json) {
    Json out = {{"suite", result.suite},
                {"passed", result.passed()},
                {"checks", to_json(std::span<const BoundCheck>(result.checks))},
                {"expected_failures", to_json(std::span<const BoundCheck>(result.expected_failures))}};
    std::cout << out.dump(2) << '\n';
    return result.passed() ? 0 : kExitCheckFailed;
  }

  std::size_t shown = 0;
  for (const auto& c : result.checks) {
    if (c.holds) continue;
    if (shown++ < a.show) std::cout << "FAIL  " << describe(c) << '\n';
  }
  if (shown > a.show) std::cout << "... " << shown - a.show << " more failures\n";
  for (const auto& c : result.expected_failures) {
    std::cout << (c.holds ? "UNEXPECTED-PASS  " : "EXPECTED-FAIL  ") << describe(c) << '\n';
  }
  std::printf("%-20s %10s %10s %8s\n", "suite", "checks", "failures", "result");
  std::printf("%-20s %10zu %10zu %8s\n", result.suite.c_str(), result.checks.size(), result.failures(),
              result.passed() ? "PASS" : "FAIL");
  return result.passed() ? 0 : kExitCheckFailed;
}

// ---- experiment -------------------------------------------------------------

struct ExperimentArgs {
  std::string dataset;
  std::string schema;
  std::size_t synthetic = 0;
  double colocated = 0.08;
  std::size_t k_min = 1;
  std::size_t k_max = 40;
  std::size_t metrics = 10;
  std::size_t panels = 50;
  std::vector<std::string> algorithms = {"uniform", "fgc"};
  std::optional<std::uint64_t> seed;
  std::size_t subsample = 3000;
  bool round = false;
  std::string csv_out;
  std::string json_out;
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentConfig config;
  config.seed = resolve_seed(a.seed);
  config.k_min = a.k_min;
  config.k_max = a.k_max;
  config.metrics_per_run = a.metrics;
  config.panels_per_metric = a.panels;
  config.agent_subsample = a.subsample;
  config.round_expost = a.round;
  config.algorithms.clear();
  for (const auto& name : a.algorithms) config.algorithms.push_back(parse_algorithm(name));

  FeatureTable table = [&] {
    if (a.synthetic > 0) return synthetic_two_cluster(a.synthetic, a.colocated, config.seed);
    if (a.dataset.empty() || a.schema.empty()) {
      throw std::invalid_argument("experiment needs --dataset and --schema, or --synthetic N");
    }
    config.dataset_path = a.dataset;
    config.schema = parse_schema(a.schema);
    return load_dataset(a.dataset, config.schema);
  }();
  std::cerr << "agents: " << table.rows() << '\n';

  const auto rows = expost_distribution(table, config);
  std::ostringstream csv;
  write_rows_csv(csv, rows);
  emit(csv.str(), a.csv_out);
  if (!a.json_out.empty()) emit(to_json(std::span<const ExperimentRow>(rows)).dump() + "\n", a.json_out);
  return 0;
}

// ---- figure1 ----------------------------------------------------------------

int cmd_figure1(bool json) {
  const Instance inst = gen_example1();
  Json out = Json::array();
  if (!json) std::printf("%-4s %18s %18s %18s %18s\n", "k", "c1", "c2", "c3", "ex_ante");
  for (std::size_t k = 1; k <= inst.n(); ++k) {
    const DistortionReport r = ex_ante_exact(inst, uniform_support(inst.n(), k));
    if (json) {
      out.push_back({{"k", k}, {"win_prob", r.win_prob}, {"ex_ante", r.ex_ante}});
    } else {
      std::printf("%-4zu %18.15f %18.15f %18.15f %18.15f\n", k, r.win_prob[0], r.win_prob[1], r.win_prob[2],
                  r.ex_ante);
    }
  }
  if (json) std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric distortion of sortition: instances, panel selection, distortion and bound checks"};
  app.require_subcommand(1, 1);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check the pseudo-metric axioms of an instance");
  validate->add_option("--instance", va.instance, "Instance JSON file, or - for stdin")->required();
  validate->add_option("--tol", va.tol, "Tolerance")->check(CLI::NonNegativeNumber);
  validate->add_flag("--json", va.json, "Machine-readable output");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Write a generated instance as JSON");
  generate->add_option("family", ga.family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"example1", "det-lower", "fair-lower", "two-block", "fgc-line-k2", "bad-fair-line",
                             "random-family", "random-euclidean"}));
  generate->add_option("--n", ga.n, "Number of agents")->check(CLI::PositiveNumber);
  generate->add_option("--k", ga.k, "Panel size")->check(CLI::PositiveNumber);
  generate->add_option("--m", ga.m, "Number of alternatives (random families)")->check(CLI::PositiveNumber);
  generate->add_option("--dim", ga.dim, "Dimension (random-euclidean)")->check(CLI::PositiveNumber);
  generate->add_option("--eps", ga.eps, "Epsilon parameter");
  generate->add_option("--delta", ga.delta, "Delta parameter");
  generate->add_option("--panel", ga.panel, "Deterministic panel for det-lower, e.g. 0,1,2")->delimiter(',');
  generate->add_option("--cap", ga.cap, "Instance size cap (fair-lower)");
  generate->add_option("--seed", ga.seed, "Random seed");
  generate->add_option("--out", ga.out, "Output file (default stdout)");

  DistortionArgs da;
  auto* distortion = app.add_subcommand("distortion", "Ex-ante and ex-post distortion of a selection algorithm");
  distortion->add_option("--instance", da.instance, "Instance JSON file, or - for stdin")->required();
  distortion->add_option("--algorithm", da.algorithm, "Selection algorithm")
      ->check(CLI::IsMember({"uniform", "fgc", "fixed", "bad-fair"}));
  distortion->add_option("--k", da.k, "Panel size")->check(CLI::PositiveNumber);
  distortion->add_option("--mode", da.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  distortion->add_option("--trials", da.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  distortion->add_option("--seed", da.seed, "Random seed (mc)");
  distortion->add_option("--panel", da.panel, "Panel for the fixed algorithm, e.g. 0,1,2")->delimiter(',');
  distortion->add_option("--cap", da.cap, "Support enumeration cap (exact)");
  distortion->add_flag("--json", da.json, "Machine-readable output");

  TraceArgs ta;
  auto* trace = app.add_subcommand("fgc-trace", "Ball-growing partition of Fair Greedy Capture");
  trace->add_option("--instance", ta.instance, "Instance JSON file, or - for stdin")->required();
  trace->add_option("--k", ta.k, "Panel size")->required()->check(CLI::PositiveNumber);
  trace->add_flag("--json", ta.json, "Machine-readable output");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Run a property sweep over the theoretical bounds");
  bounds->add_option("suite", ba.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"anti-concentration", "serfling", "lemma-19-21", "fairness", "thm2", "thm6"}));
  bounds->add_flag("--include-k2", ba.include_k2, "thm6: add the k=2 line instance as an expected failure");
  bounds->add_option("--seed", ba.seed, "Random seed");
  bounds->add_option("--instances", ba.instances, "Random instances (fairness, thm2, thm6)");
  bounds->add_option("--trials", ba.trials, "Monte Carlo trials per vector (serfling)")->check(CLI::PositiveNumber);
  bounds->add_option("--show", ba.show, "Failures to list");
  bounds->add_flag("--json", ba.json, "Machine-readable output");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Average and ex-post distortion over random feature metrics");
  experiment->add_option("--dataset", ea.dataset, "CSV file with a header row");
  experiment->add_option("--schema", ea.schema, "Columns to use, e.g. sex:categorical,age:continuous");
  experiment->add_option("--synthetic", ea.synthetic, "Use a synthetic two-cluster dataset with N agents");
  experiment->add_option("--colocated", ea.colocated, "Co-located fraction of the synthetic dataset");
  experiment->add_option("--k-min", ea.k_min, "Smallest panel size")->check(CLI::PositiveNumber);
  experiment->add_option("--k-max", ea.k_max, "Largest panel size")->check(CLI::PositiveNumber);
  experiment->add_option("--metrics", ea.metrics, "Random metrics per run")->check(CLI::PositiveNumber);
  experiment->add_option("--panels", ea.panels, "Panels per metric")->check(CLI::PositiveNumber);
  experiment->add_option("--algorithms", ea.algorithms, "uniform and/or fgc")
      ->delimiter(',')
      ->check(CLI::IsMember({"uniform", "fgc"}));
  experiment->add_option("--seed", ea.seed, "Random seed");
  experiment->add_option("--subsample", ea.subsample, "Cap on the number of agents")->check(CLI::PositiveNumber);
  experiment->add_flag("--round", ea.round, "Round ex-post samples to two decimals");
  experiment->add_option("--csv", ea.csv_out, "Summary CSV output (default stdout)");
  experiment->add_option("--json", ea.json_out, "Raw samples JSON output");

  bool figure_json = false;
  auto* figure1 = app.add_subcommand("figure1", "Win probabilities on the 10-agent example for k = 1..10");
  figure1->add_flag("--json", figure_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(va);
    if (*generate) return cmd_generate(ga);
    if (*distortion) return cmd_distortion(da);
    if (*trace) return cmd_fgc_trace(ta);
    if (*bounds) return cmd_bounds(ba);
    if (*experiment) return cmd_experiment(ea);
    return cmd_figure1(figure_json);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}
