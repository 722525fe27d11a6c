#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sortition/experiments.hpp"
#include "sortition/metric.hpp"
#include "test_support.hpp"

using namespace sortition;

namespace {

MetricSpace square(std::vector<std::vector<double>> rows) {
  const std::size_t n = rows.size();
  std::vector<double> d;
  for (auto& r : rows) d.insert(d.end(), r.begin(), r.end());
  return {n, std::move(d)};
}

}  // namespace

TEST(Metric, ShapeIsChecked) {
  EXPECT_THROW(MetricSpace(3, std::vector<double>(8)), std::invalid_argument);
}

TEST(Metric, LineMetricIsValid) {
  const std::vector<double> pos = {0.0, 1.5, -2.0, 7.0};
  const auto m = line_metric(pos);
  EXPECT_TRUE(validate_metric(m, 0.0).empty());
  EXPECT_DOUBLE_EQ(m(2, 3), 9.0);
}

TEST(Metric, PseudoMetricZeroDistancesAllowed) {
  const auto m = square({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}});
  EXPECT_TRUE(validate_metric(m, 0.0).empty());
}

TEST(Metric, ReportsEachViolationKind) {
  const auto diag = validate_metric(square({{0.5, 1}, {1, 0}}), 1e-12);
  ASSERT_EQ(diag.size(), 1u);
  EXPECT_EQ(diag[0].kind, ViolationKind::kNonzeroDiagonal);

  const auto neg = validate_metric(square({{0, -1}, {-1, 0}}), 1e-12);
  ASSERT_EQ(neg.size(), 2u);
  EXPECT_EQ(neg[0].kind, ViolationKind::kNegative);

  const auto asym = validate_metric(square({{0, 1}, {2, 0}}), 1e-12);
  ASSERT_EQ(asym.size(), 1u);
  EXPECT_EQ(asym[0].kind, ViolationKind::kAsymmetry);
  EXPECT_DOUBLE_EQ(asym[0].excess, 1.0);
}

TEST(Metric, TriangleViolationReportedOncePerPair) {
  const auto v = validate_metric(square({{0, 5, 1}, {5, 0, 1}, {1, 1, 0}}), 1e-12);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (Violation{ViolationKind::kTriangle, 0, 1, 2, 3.0}));
}

TEST(Metric, ToleranceSuppressesTinyViolations) {
  const auto m = square({{0, 2 + 1e-12, 1}, {2 + 1e-12, 0, 1}, {1, 1, 0}});
  EXPECT_TRUE(validate_metric(m, 1e-9).empty());
  EXPECT_EQ(validate_metric(m, 0.0).size(), 1u);
}

TEST(Metric, ShortestPathMetric) {
  const std::vector<Edge> edges = {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 5.0}, {2, 3, 0.0}};
  const auto m = shortest_path_metric(4, edges);
  EXPECT_DOUBLE_EQ(m(0, 2), 3.0);
  EXPECT_DOUBLE_EQ(m(0, 3), 3.0);
  EXPECT_DOUBLE_EQ(m(3, 2), 0.0);
  EXPECT_TRUE(validate_metric(m, 0.0).empty());
}

TEST(Metric, ShortestPathRejectsBadGraphs) {
  const std::vector<Edge> negative = {{0, 1, -1.0}};
  EXPECT_THROW(shortest_path_metric(2, negative), std::invalid_argument);
  const std::vector<Edge> outside = {{0, 5, 1.0}};
  EXPECT_THROW(shortest_path_metric(2, outside), std::invalid_argument);
  const std::vector<Edge> split = {{0, 1, 1.0}, {2, 3, 1.0}};
  try {
    shortest_path_metric(4, split);
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("no path"), std::string::npos);
  }
}

TEST(Metric, FeatureKindParsing) {
  EXPECT_EQ(parse_feature_kind("categorical"), FeatureKind::kCategorical);
  EXPECT_EQ(parse_feature_kind("continuous"), FeatureKind::kContinuous);
  EXPECT_THROW(parse_feature_kind("ordinal"), std::invalid_argument);
}

TEST(Metric, FeatureWeightsInUnitInterval) {
  EXPECT_THROW(FeatureWeights({0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(FeatureWeights({-0.1}), std::invalid_argument);
  EXPECT_NO_THROW(FeatureWeights({0.0, 1.0}));
}

TEST(Metric, FeatureTableValidatesColumns) {
  EXPECT_THROW(FeatureTable(3, {{"a", FeatureKind::kContinuous, {1, 2}, {}}}), std::invalid_argument);
  EXPECT_THROW(FeatureTable(1, {{"a", FeatureKind::kContinuous, {NAN}, {}}}), std::invalid_argument);
}

TEST(Metric, FeatureMetricHandComputed) {
  // cat = [x, y, x], cont = [0, 5, 10]; weights (1, 0.25)
  const FeatureTable t(3, {{"cat", FeatureKind::kCategorical, {0, 1, 0}, {"x", "y"}},
                           {"cont", FeatureKind::kContinuous, {0, 5, 10}, {}}});
  const auto m = metric_from_features(t, FeatureWeights({1.0, 0.25}));
  EXPECT_DOUBLE_EQ(m(0, 1), 1.125);
  EXPECT_DOUBLE_EQ(m(0, 2), 0.25);
  EXPECT_DOUBLE_EQ(m(1, 2), 1.125);
  EXPECT_DOUBLE_EQ(m(2, 1), 1.125);
  EXPECT_DOUBLE_EQ(m(1, 1), 0.0);
}

TEST(Metric, ConstantContinuousColumnContributesNothing) {
  const FeatureTable t(2, {{"c", FeatureKind::kContinuous, {4, 4}, {}}});
  const auto m = metric_from_features(t, FeatureWeights({1.0}));
  EXPECT_EQ(m(0, 1), 0.0);
}

TEST(Metric, FeatureMetricWeightCountMismatch) {
  const FeatureTable t(2, {{"c", FeatureKind::kContinuous, {0, 1}, {}}});
  EXPECT_THROW(metric_from_features(t, FeatureWeights({1.0, 1.0})), std::invalid_argument);
}

TEST(Metric, RandomFeatureMetricsAreValid) {
  Rng rng(11);
  for (int round = 0; round < 30; ++round) {
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 25)(rng);
    const std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    std::vector<FeatureColumn> columns;
    for (std::size_t c = 0; c < cols; ++c) {
      FeatureColumn col{"c" + std::to_string(c), c % 2 ? FeatureKind::kCategorical : FeatureKind::kContinuous, {}, {}};
      for (std::size_t r = 0; r < rows; ++r) {
        col.values.push_back(col.kind == FeatureKind::kCategorical
                                 ? double(std::uniform_int_distribution<int>(0, 2)(rng))
                                 : std::uniform_real_distribution<double>(-5, 5)(rng));
      }
      columns.push_back(std::move(col));
    }
    const FeatureTable table(rows, std::move(columns));
    const auto m = sample_metric(table, rng);
    EXPECT_TRUE(validate_metric(m, 1e-12).empty()) << "round " << round;
  }
}
