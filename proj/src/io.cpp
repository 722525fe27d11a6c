#include "sortition/io.hpp"

#include <fstream>

#include "sortition/errors.hpp"

namespace sortition {
namespace {

// Wraps nlohmann's accessors so that any shape error becomes a ParseError.
template <class F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed ") + what + " JSON: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid ") + what + ": " + e.what());
  }
}

std::string_view method_name(EstimateMethod m) { return m == EstimateMethod::kExact ? "exact" : "monte-carlo"; }

}  // namespace

Json to_json(const Instance& instance) {
  const auto& metric = instance.metric();
  Json dist = Json::array();
  for (std::size_t i = 0; i < metric.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) dist.push_back(metric(i, j));
  }
  return {{"n", instance.n()}, {"m", instance.m()}, {"dist", std::move(dist)}};
}

Instance instance_from_json(const Json& doc) {
  return parsing("instance", [&] {
    const auto n = doc.at("n").get<std::size_t>();
    const auto m = doc.at("m").get<std::size_t>();
    const auto& tri = doc.at("dist");
    const std::size_t size = n + m;
    if (!tri.is_array() || tri.size() != size * (size + 1) / 2) {
      throw ParseError("instance JSON: dist must hold " + std::to_string(size * (size + 1) / 2) +
                       " numbers for n+m=" + std::to_string(size));
    }
    std::vector<double> d(size * size);
    std::size_t t = 0;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = tri[t++].get<double>();
        d[i * size + j] = v;
        d[j * size + i] = v;
      }
    }
    return Instance(MetricSpace(size, std::move(d)), n, m);
  });
}

Json to_json(const PanelDistribution& dist) {
  Json support = Json::array();
  for (const auto& e : dist.support()) {
    support.push_back({{"members", std::vector<std::size_t>(e.panel.members().begin(), e.panel.members().end())},
                       {"prob", e.probability}});
  }
  return {{"k", dist.k()}, {"support", std::move(support)}};
}

PanelDistribution distribution_from_json(const Json& doc) {
  return parsing("panel distribution", [&] {
    std::vector<SupportEntry> support;
    for (const auto& e : doc.at("support")) {
      support.push_back({Panel(e.at("members").get<std::vector<std::size_t>>()), e.at("prob").get<double>()});
    }
    return PanelDistribution(doc.at("k").get<std::size_t>(), std::move(support));
  });
}

Json to_json(const DistortionReport& r) {
  Json doc = {{"method", method_name(r.method)},
              {"ex_ante", r.ex_ante},
              {"ex_post", r.ex_post},
              {"ex_post_is_lower_bound", r.ex_post_is_lower_bound},
              {"optimal_alternative", r.optimal_alternative},
              {"optimal_cost", r.optimal_cost},
              {"social_costs", r.social_costs},
              {"win_prob", r.win_prob}};
  if (r.method == EstimateMethod::kMonteCarlo) {
    doc["trials"] = r.trials;
    doc["ci_halfwidth"] = r.ci_halfwidth;
  }
  return doc;
}

DistortionReport report_from_json(const Json& doc) {
  return parsing("distortion report", [&] {
    DistortionReport r;
    const auto method = doc.at("method").get<std::string>();
    if (method != "exact" && method != "monte-carlo") throw ParseError("unknown method '" + method + "'");
    r.method = method == "exact" ? EstimateMethod::kExact : EstimateMethod::kMonteCarlo;
    r.ex_ante = doc.at("ex_ante").get<double>();
    r.ex_post = doc.at("ex_post").get<double>();
    r.ex_post_is_lower_bound = doc.at("ex_post_is_lower_bound").get<bool>();
    r.optimal_alternative = doc.at("optimal_alternative").get<std::size_t>();
    r.optimal_cost = doc.at("optimal_cost").get<double>();
    r.social_costs = doc.at("social_costs").get<std::vector<double>>();
    r.win_prob = doc.at("win_prob").get<std::vector<double>>();
    if (r.method == EstimateMethod::kMonteCarlo) {
      r.trials = doc.at("trials").get<std::size_t>();
      r.ci_halfwidth = doc.at("ci_halfwidth").get<double>();
    }
    return r;
  });
}

Json to_json(const BallTrace& t) {
  return {{"group_size", t.group_size}, {"groups", t.groups}, {"leftover", t.leftover},
          {"centers", t.centers},       {"radii", t.radii}};
}

BallTrace trace_from_json(const Json& doc) {
  return parsing("ball trace", [&] {
    BallTrace t;
    t.group_size = doc.at("group_size").get<std::size_t>();
    t.groups = doc.at("groups").get<std::vector<std::vector<std::size_t>>>();
    t.leftover = doc.at("leftover").get<std::vector<std::size_t>>();
    t.centers = doc.at("centers").get<std::vector<std::size_t>>();
    t.radii = doc.at("radii").get<std::vector<double>>();
    return t;
  });
}

Json to_json(const BoundCheck& c) {
  return {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}, {"params", c.params}};
}

Json to_json(std::span<const BoundCheck> checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(to_json(c));
  return out;
}

std::vector<BoundCheck> checks_from_json(const Json& doc) {
  return parsing("bound checks", [&] {
    std::vector<BoundCheck> out;
    for (const auto& c : doc) {
      out.push_back({c.at("name").get<std::string>(), c.at("lhs").get<double>(), c.at("rhs").get<double>(),
                     c.at("holds").get<bool>(), c.at("params").get<std::map<std::string, double>>()});
    }
    return out;
  });
}

Json to_json(std::span<const ExperimentRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"algorithm", to_string(r.algorithm)},
                   {"k", r.k},
                   {"mean", r.mean},
                   {"ci_low", r.ci_low},
                   {"ci_high", r.ci_high},
                   {"samples", r.samples}});
  }
  return out;
}

std::vector<ExperimentRow> rows_from_json(const Json& doc) {
  return parsing("experiment rows", [&] {
    std::vector<ExperimentRow> out;
    for (const auto& r : doc) {
      out.push_back({parse_algorithm(r.at("algorithm").get<std::string>()), r.at("k").get<std::size_t>(),
                     r.at("mean").get<double>(), r.at("ci_low").get<double>(), r.at("ci_high").get<double>(),
                     r.at("samples").get<std::vector<double>>()});
    }
    return out;
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

}  // namespace sortition
