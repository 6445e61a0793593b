/*
 * Copyright 2026 The axai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "axai/shapley.hpp"

#include <cmath>
#include <set>

#include "axai/error.hpp"
#include "axai/forest.hpp"
#include "axai/random.hpp"
#include "axai/synthetic.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

namespace axai {
namespace {

FeatureMatrix random_rows(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  FeatureMatrix rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(FeatureVector{{300.0 * rng.uniform_index(288), rng.uniform01(),
                                  5.0 + 115.0 * rng.uniform01()}});
  }
  return rows;
}

std::vector<std::vector<double>> as_vectors(const FeatureMatrix& rows) {
  std::vector<std::vector<double>> out;
  for (const auto& r : rows) out.push_back({r[0], r[1], r[2]});
  return out;
}

double sum(const std::array<double, kNumFeatures>& a) { return a[0] + a[1] + a[2]; }

TEST(ExplainShap, ConstantPredictor) {
  const FunctionPredictor constant([](const FeatureVector&) { return 321.0; });
  const ShapleyExplanation e = explain_shap(constant, {{3600.0, 0.1, 50.0}}, random_rows(30, 1));
  EXPECT_EQ(e.phi, (std::array<double, 3>{0.0, 0.0, 0.0}));
  EXPECT_EQ(e.base_value, 321.0);
  EXPECT_EQ(e.predicted, 321.0);
}

TEST(ExplainShap, AdditivePredictorCollapses) {
  auto g1 = [](double t) { return std::sin(t / 10000.0) * 40.0; };
  auto g2 = [](double o) { return 600.0 * o * o; };
  auto g3 = [](double s) { return 2.0 * s; };
  const FunctionPredictor p([&](const FeatureVector& x) {
    return g1(x.interval()) + g2(x.occ()) + g3(x.speed());
  });
  const FeatureMatrix bg = random_rows(40, 2);
  const FeatureVector x{{61200.0, 0.33, 44.0}};
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  for (const auto& b : bg) {
    m1 += g1(b[0]);
    m2 += g2(b[1]);
    m3 += g3(b[2]);
  }
  const double n = static_cast<double>(bg.size());
  const ShapleyExplanation e = explain_shap(p, x, bg);
  EXPECT_NEAR(e.phi[0], g1(x[0]) - m1 / n, 1e-9);
  EXPECT_NEAR(e.phi[1], g2(x[1]) - m2 / n, 1e-9);
  EXPECT_NEAR(e.phi[2], g3(x[2]) - m3 / n, 1e-9);
}

TEST(InterventionalShapley, TwoFeatureHandEnumeration) {
  const auto product = [](std::span<const double> z) { return z[0] * z[1]; };
  const std::vector<double> x{1.0, 0.0};
  const std::vector<std::vector<double>> bg{{0.0, 0.0}, {1.0, 1.0}};
  const InterventionalResult r = interventional_shapley(product, x, bg);
  ASSERT_EQ(r.coalition_values.size(), 4u);
  EXPECT_EQ(r.coalition_values[0b00], 0.5);
  EXPECT_EQ(r.coalition_values[0b01], 0.5);
  EXPECT_EQ(r.coalition_values[0b10], 0.0);
  EXPECT_EQ(r.coalition_values[0b11], 0.0);
  EXPECT_EQ(r.phi[0], 0.0);
  EXPECT_EQ(r.phi[1], -0.5);

  double base = 0.0;
  const std::vector<double> oracle = testing::brute_force_shapley(
      [](const std::vector<double>& z) { return z[0] * z[1]; }, x, bg, &base);
  EXPECT_EQ(base, 0.5);
  EXPECT_NEAR(oracle[0], 0.0, 1e-12);
  EXPECT_NEAR(oracle[1], -0.5, 1e-12);
}

TEST(ShapleyValues, GenericGameMatchesClosedForm) {
  // Glove game: player 0 holds a left glove, players 1 and 2 right gloves.
  const auto glove = [](std::uint32_t s) {
    return (s & 1u) && (s & 6u) ? 1.0 : 0.0;
  };
  const std::vector<double> phi = shapley_values(3, glove);
  EXPECT_NEAR(phi[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(phi[1], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(phi[2], 1.0 / 6.0, 1e-15);
}

TEST(InterventionalShapley, MatchesBruteForceInHigherDimensions) {
  Rng rng(5);
  for (std::size_t n : {1u, 2u, 4u, 5u}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    std::vector<std::vector<double>> bg(7, std::vector<double>(n));
    for (auto& row : bg) for (double& v : row) v = rng.normal();
    const auto f = [](const std::vector<double>& z) {
      double out = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) out += (j + 1.0) * std::tanh(z[j] * z[(j + 1) % z.size()]);
      return out;
    };
    const InterventionalResult r = interventional_shapley(
        [&](std::span<const double> z) { return f(std::vector<double>(z.begin(), z.end())); }, x, bg);
    double base = 0.0;
    const std::vector<double> oracle = testing::brute_force_shapley(f, x, bg, &base);
    EXPECT_NEAR(r.coalition_values[0], base, 1e-9);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(r.phi[j], oracle[j], 1e-9) << n << " " << j;
  }
}

class ForestShap : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const Dataset d = synthetic_utd19(400, 21);
    ForestConfig cfg;
    cfg.n_trees = 30;
    forest_ = new Forest(train(feature_matrix(d), flow_targets(d), cfg));
    background_ = new FeatureMatrix(select_background(feature_matrix(d), ShapConfig{}));
    probes_ = new FeatureMatrix(feature_matrix(synthetic_utd19(20, 22)));
  }
  static void TearDownTestSuite() {
    delete forest_;
    delete background_;
    delete probes_;
  }
  static Forest* forest_;
  static FeatureMatrix* background_;
  static FeatureMatrix* probes_;
};
Forest* ForestShap::forest_ = nullptr;
FeatureMatrix* ForestShap::background_ = nullptr;
FeatureMatrix* ForestShap::probes_ = nullptr;

TEST_F(ForestShap, Efficiency) {
  for (const auto& x : *probes_) {
    const ShapleyExplanation e = explain_shap(*forest_, x, *background_);
    EXPECT_EQ(e.predicted, forest_->predict(x));
    EXPECT_LE(std::fabs(e.base_value + sum(e.phi) - e.predicted), 1e-6);
  }
}

TEST_F(ForestShap, MatchesBruteForceOracle) {
  const auto model = [&](const std::vector<double>& z) {
    return forest_->predict(FeatureVector{{z[0], z[1], z[2]}});
  };
  for (std::size_t i = 0; i < 5; ++i) {
    const FeatureVector& x = (*probes_)[i];
    const ShapleyExplanation e = explain_shap(*forest_, x, *background_);
    double base = 0.0;
    const std::vector<double> oracle =
        testing::brute_force_shapley(model, {x[0], x[1], x[2]}, as_vectors(*background_), &base);
    EXPECT_NEAR(e.base_value, base, 1e-9);
    for (std::size_t j = 0; j < kNumFeatures; ++j) EXPECT_NEAR(e.phi[j], oracle[j], 1e-9);
  }
}

TEST_F(ForestShap, BaseValueIsMeanBackgroundPrediction) {
  double mean = 0.0;
  for (const auto& b : *background_) mean += forest_->predict(b);
  mean /= static_cast<double>(background_->size());
  EXPECT_NEAR(explain_shap(*forest_, probes_->front(), *background_).base_value, mean, 1e-9);
}

TEST(ShapAxioms, Symmetry) {
  const FunctionPredictor p([](const FeatureVector& x) {
    return x[0] * x[1] + std::exp(x[0]) + std::exp(x[1]) + 3.0 * x[2];
  });
  Rng rng(8);
  FeatureMatrix bg;
  // Interventional symmetry also needs a background exchangeable in the two
  // features, so every row comes with its swapped twin.
  for (int i = 0; i < 25; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    bg.push_back(FeatureVector{{a, b, c}});
    bg.push_back(FeatureVector{{b, a, c}});
  }
  const ShapleyExplanation e = explain_shap(p, {{0.7, 0.7, -1.0}}, bg);
  EXPECT_NEAR(e.phi[0], e.phi[1], 1e-9);
}

TEST(ShapAxioms, DummyFeatureOfForestIsExactlyZero) {
  FeatureMatrix x = random_rows(300, 9);
  std::vector<double> y;
  for (auto& row : x) {
    row[0] = 28800.0;
    y.push_back(1000.0 * row.occ() + 0.5 * row.speed());
  }
  ForestConfig cfg;
  cfg.n_trees = 20;
  const Forest f = train(x, y, cfg);
  for (const Tree& t : f.trees()) ASSERT_FALSE(t.uses_feature(0));

  const FeatureMatrix bg = random_rows(50, 10);  // interval varies here
  for (const auto& probe : random_rows(20, 11)) {
    EXPECT_EQ(explain_shap(f, probe, bg).phi[0], 0.0);
  }
}

TEST(ShapAxioms, Linearity) {
  const auto p1 = [](const FeatureVector& x) { return x[0] * x[2] + x[1]; };
  const auto p2 = [](const FeatureVector& x) { return std::cos(x[1]) * x[2] - x[0]; };
  const double a = 2.5, b = -0.75;
  const FeatureMatrix bg = random_rows(30, 12);
  const FeatureVector x{{7200.0, 0.4, 88.0}};
  const auto e1 = explain_shap(FunctionPredictor(p1), x, bg);
  const auto e2 = explain_shap(FunctionPredictor(p2), x, bg);
  const auto mix = explain_shap(
      FunctionPredictor([&](const FeatureVector& v) { return a * p1(v) + b * p2(v); }), x, bg);
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    const double expected = a * e1.phi[j] + b * e2.phi[j];
    EXPECT_NEAR(mix.phi[j], expected, 1e-9 * std::max(1.0, std::fabs(expected)));
  }
}

TEST(ExplainShap, EmptyBackgroundIsAnError) {
  const FunctionPredictor p([](const FeatureVector&) { return 1.0; });
  try {
    explain_shap(p, {{0.0, 0.0, 0.0}}, {});
    FAIL();
  } catch (const ExplainError& e) {
    EXPECT_EQ(e.code(), ExplainErrorCode::kEmptyBackground);
  }
  EXPECT_THROW(explain_shap(p, {{0.0, 0.0, 0.0}}, random_rows(3, 1), ShapConfig{0, 1}),
               ExplainError);
}

TEST(SelectBackground, SubsamplesDeterministicallyWithoutRepeats) {
  const FeatureMatrix rows = random_rows(500, 13);
  const FeatureMatrix a = select_background(rows, ShapConfig{100, 42});
  EXPECT_EQ(a.size(), 100u);
  EXPECT_EQ(a, select_background(rows, ShapConfig{100, 42}));
  EXPECT_NE(a, select_background(rows, ShapConfig{100, 43}));
  std::set<std::array<double, 3>> distinct;
  for (const auto& r : a) distinct.insert(r.values);
  EXPECT_EQ(distinct.size(), 100u);

  const FeatureMatrix small = random_rows(10, 14);
  EXPECT_EQ(select_background(small, ShapConfig{}), small);
}

ShapleyExplanation worked_example() {
  ShapleyExplanation e;
  e.base_value = 100.0;
  e.phi = {2.0, -10.0, 40.0};
  e.instance = {{30600.0, 0.2, 50.0}};
  e.predicted = 132.0;
  return e;
}

TEST(ShapVariant, DetailedRunningSums) {
  const Explanation e = shap_variant(worked_example(), Variant::kDetailed);
  EXPECT_EQ(e.method, ExplanationMethod::kShapDetailed);
  ASSERT_TRUE(e.shap.has_value());
  EXPECT_EQ(e.shap->points.size(), 3u);
  EXPECT_EQ(e.shap->running_sums(), (std::vector<double>{100.0, 140.0, 130.0, 132.0}));
  EXPECT_EQ(e.shap->points.back().running_total, e.predicted);
  EXPECT_EQ(e.shap->points[0].attribution.raw_value, 50.0);
}

TEST(ShapVariant, SimplifiedRanksByMagnitude) {
  const Explanation e = shap_variant(worked_example(), Variant::kSimplified);
  EXPECT_EQ(e.method, ExplanationMethod::kShapSimplified);
  EXPECT_FALSE(e.shap.has_value());
  ASSERT_EQ(e.ranked.size(), 3u);
  EXPECT_EQ(e.ranked[0].feature, static_cast<std::size_t>(Feature::kSpeed));
  EXPECT_EQ(e.ranked[1].feature, static_cast<std::size_t>(Feature::kOcc));
  EXPECT_EQ(e.ranked[2].feature, static_cast<std::size_t>(Feature::kInterval));
}

}  // namespace
}  // namespace axai
