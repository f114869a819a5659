#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bearing/metrics.hpp"
#include "oracles.hpp"

using namespace bearing;
using namespace bearing::eval;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};

// Random instance with both classes and many ties (scores on a coarse grid).
Instance random_instance(std::mt19937_64& g) {
  std::uniform_int_distribution<int> len(2, 50), grid(0, 9), coin(0, 1);
  Instance in;
  const int n = len(g);
  for (int i = 0; i < n; ++i) {
    in.scores.push_back(grid(g) / 10.0);
    in.labels.push_back(static_cast<std::uint8_t>(coin(g)));
  }
  in.labels[0] = 1;
  in.labels[1] = 0;
  return in;
}

}  // namespace

TEST(Auroc, Examples) {
  const std::vector<std::uint8_t> y{1, 1, 0, 0};
  EXPECT_EQ(auroc(std::vector<double>{0.9, 0.8, 0.3, 0.2}, y), 1.0);
  EXPECT_EQ(auroc(std::vector<double>{0.9, 0.3, 0.8, 0.2}, y), 0.75);
  EXPECT_EQ(auroc(std::vector<double>{0.4, 0.4, 0.4, 0.4}, y), 0.5);
}

TEST(Auroc, SingleClassIsUndefined) {
  EXPECT_THROW(auroc(std::vector<double>{0.1, 0.2}, std::vector<std::uint8_t>{1, 1}), UndefinedMetric);
  EXPECT_THROW(auroc(std::vector<double>{0.1, 0.2}, std::vector<std::uint8_t>{0, 0}), UndefinedMetric);
}

TEST(Auroc, RejectsNanAndMismatch) {
  EXPECT_THROW(auroc(std::vector<double>{NAN, 0.2}, std::vector<std::uint8_t>{1, 0}), std::invalid_argument);
  EXPECT_THROW(auroc(std::vector<double>{0.1}, std::vector<std::uint8_t>{1, 0}), std::invalid_argument);
}

// 1000 random instances: integer trapezoid, Mann-Whitney and brute-force
// pair counting agree exactly.
TEST(AurocProperty, ThreeRoutesAgreeExactly) {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto in = random_instance(g);
    const auto ref = oracle::auroc_pairs(in.scores, in.labels);
    const double mw = auroc(in.scores, in.labels);
    const auto curve = roc_curve(in.scores, in.labels);
    EXPECT_EQ(mw, ref.value()) << "trial " << trial;
    EXPECT_EQ(curve.area(), ref.value()) << "trial " << trial;
    EXPECT_NEAR(curve.area_from_points(), ref.value(), 1e-12) << "trial " << trial;
  }
}

TEST(AurocProperty, FlipComplement) {
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 1000; ++trial) {
    auto in = random_instance(g);
    const double a = auroc(in.scores, in.labels);
    for (auto& y : in.labels) y = 1 - y;
    EXPECT_NEAR(a + auroc(in.scores, in.labels), 1.0, 1e-12);
  }
}

TEST(AurocProperty, InvariantUnderIncreasingTransforms) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto in = random_instance(g);
    const double a = u(g), b = u(g);
    std::vector<double> t(in.scores.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = a * std::exp(b * in.scores[i]) - 7.0;
    EXPECT_EQ(auroc(t, in.labels), auroc(in.scores, in.labels));
  }
}

TEST(RocCurve, MonotoneFromOriginToOne) {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = random_instance(g);
    const auto c = roc_curve(in.scores, in.labels);
    ASSERT_GE(c.points.size(), 2u);
    EXPECT_EQ(c.points.front().fpr, 0.0);
    EXPECT_EQ(c.points.front().tpr, 0.0);
    EXPECT_EQ(c.points.back().fpr, 1.0);
    EXPECT_EQ(c.points.back().tpr, 1.0);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      EXPECT_GE(c.points[i].fpr, c.points[i - 1].fpr);
      EXPECT_GE(c.points[i].tpr, c.points[i - 1].tpr);
    }
  }
}

TEST(MacroAuroc, Examples) {
  const std::vector<std::optional<double>> ones(4, 1.0);
  EXPECT_EQ(macro_auroc(ones).value, 1.0);
  const std::vector<std::optional<double>> two{0.9, 0.7};
  EXPECT_NEAR(macro_auroc(two).value, 0.8, 1e-15);
  const std::vector<std::optional<double>> gap{0.93, std::nullopt, 0.87};
  const auto m = macro_auroc(gap);
  EXPECT_NEAR(m.value, 0.90, 1e-15);
  EXPECT_EQ(m.excluded, 1u);
  EXPECT_EQ(m.defined, 2u);
}

TEST(MacroAuroc, AllUndefinedThrows) {
  const std::vector<std::optional<double>> none(3);
  EXPECT_THROW(macro_auroc(none), UndefinedMetric);
  EXPECT_THROW(macro_auroc(std::vector<std::optional<double>>{}), std::invalid_argument);
}

TEST(PerModeAuroc, SingleClassColumnIsUndefined) {
  Matrix s(4, 2);
  const double v[4][2] = {{0.9, 0.1}, {0.8, 0.2}, {0.3, 0.3}, {0.2, 0.4}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) s(r, c) = v[r][c];
  const std::vector<LabelVector> y{{{1, 0}}, {{1, 0}}, {{0, 0}}, {{0, 0}}};
  const auto per = per_mode_auroc(s, y);
  ASSERT_EQ(per.size(), 2u);
  EXPECT_EQ(*per[0], 1.0);
  EXPECT_FALSE(per[1].has_value());
}
