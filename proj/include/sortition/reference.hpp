#pragma once

// Straightforward single-threaded versions of the parallel kernels. Tests
// compare the two; the benchmark target times them against each other.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sortition/distortion.hpp"
#include "sortition/instance.hpp"
#include "sortition/metric.hpp"
#include "sortition/selection.hpp"

namespace sortition::reference {

std::vector<Violation> validate_metric(const MetricSpace& m, double tol);

MetricSpace metric_from_features(const FeatureTable& table, const FeatureWeights& weights);

/// Recomputes every radius from scratch each round with nth_element.
BallTrace fgc_ball_trace(const AgentDistances& agents, std::size_t k);

DistortionReport ex_ante_exact(const Instance& instance, const PanelDistribution& dist);

DistortionReport ex_ante_mc(const Instance& instance, const PanelSampler& sampler, std::size_t trials,
                            std::uint64_t seed);

}  // namespace sortition::reference
