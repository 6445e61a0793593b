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

#ifndef AXAI_LIME_HPP_
#define AXAI_LIME_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "axai/dataset.hpp"
#include "axai/explanation.hpp"
#include "axai/forest.hpp"

namespace axai {

// 0.75 * sqrt(number of features).
inline constexpr double kDefaultKernelWidth = 0.75 * 1.7320508075688772;

struct LimeConfig {
  std::size_t n_samples = 5000;
  double kernel_width = kDefaultKernelWidth;
  double ridge_lambda = 1.0;
  std::uint64_t seed = 42;
  // When every training feature is constant there is nothing to regress on.
  // With the fallback the surrogate degenerates to the intercept alone,
  // otherwise explain_lime throws kDegenerateStats.
  bool allow_constant_fallback = false;
};

struct SurrogateExplanation {
  double intercept = 0.0;
  std::array<double, kNumFeatures> coefficients{};  // standardized space
  std::array<double, kNumFeatures> attributions{};  // coefficient * x_std
  double fidelity_r2 = 0.0;                         // kernel-weighted
  FeatureVector instance;
  FeatureVector standardized_instance;
  double predicted = 0.0;
};

// The perturbation design of one explanation, in standardized space.
// Row 0 is the explained instance itself.
struct LimeDesign {
  std::vector<FeatureVector> samples;
  std::vector<double> weights;
  std::vector<double> targets;
  std::array<bool, kNumFeatures> active{};  // false for zero-variance features
  FeatureVector standardized_instance;
};

struct RidgeFit {
  double intercept = 0.0;
  std::array<double, kNumFeatures> coefficients{};
};

// exp(-d^2 / width^2).
double kernel_weight(double squared_distance, double kernel_width);

LimeDesign sample_lime_design(const Predictor& model, const FeatureVector& x,
                              const StatsTable& stats, const LimeConfig& config);

// Kernel-weighted ridge with an unpenalized intercept. Inactive features get
// a zero coefficient.
RidgeFit fit_weighted_ridge(const LimeDesign& design, double ridge_lambda);

double weighted_r2(const LimeDesign& design, const RidgeFit& fit);

SurrogateExplanation explain_lime(const Predictor& model, const FeatureVector& x,
                                  const StatsTable& stats,
                                  const LimeConfig& config = {});

// Simplified keeps only the ranked attributions; detailed adds the
// intercept, fidelity and sign groups.
Explanation lime_variant(const SurrogateExplanation& surrogate, Variant variant);

}  // namespace axai

#endif  // AXAI_LIME_HPP_
