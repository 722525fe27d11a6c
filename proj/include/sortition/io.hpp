#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sortition/bounds.hpp"
#include "sortition/distortion.hpp"
#include "sortition/experiments.hpp"
#include "sortition/instance.hpp"
#include "sortition/selection.hpp"

namespace sortition {

using Json = nlohmann::json;

/// {n, m, dist}: dist is the row-major lower triangle including the
/// diagonal, (n+m)(n+m+1)/2 numbers. Doubles round-trip bit-exactly.
Json to_json(const Instance& instance);
/// Throws ParseError on a malformed document.
Instance instance_from_json(const Json& doc);

/// {k, support: [{members, prob}]}
Json to_json(const PanelDistribution& dist);
PanelDistribution distribution_from_json(const Json& doc);

Json to_json(const DistortionReport& report);
DistortionReport report_from_json(const Json& doc);

Json to_json(const BallTrace& trace);
BallTrace trace_from_json(const Json& doc);

Json to_json(const BoundCheck& check);
Json to_json(std::span<const BoundCheck> checks);
std::vector<BoundCheck> checks_from_json(const Json& doc);

/// Rows with their raw samples.
Json to_json(std::span<const ExperimentRow> rows);
std::vector<ExperimentRow> rows_from_json(const Json& doc);

/// Reads and parses a JSON file; throws ParseError naming the path.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

Instance load_instance(const std::string& path);

}  // namespace sortition
