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

#ifndef AXAI_SHAPLEY_HPP_
#define AXAI_SHAPLEY_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "axai/dataset.hpp"
#include "axai/explanation.hpp"
#include "axai/forest.hpp"

namespace axai {

struct ShapConfig {
  std::size_t background_size = 100;
  std::uint64_t background_seed = 42;
};

struct ShapleyExplanation {
  double base_value = 0.0;  // v(empty set): mean prediction over background
  std::array<double, kNumFeatures> phi{};
  FeatureVector instance;
  double predicted = 0.0;
};

// Up to `background_size` rows chosen by a seeded partial Fisher-Yates
// shuffle; smaller inputs are returned unchanged.
FeatureMatrix select_background(const FeatureMatrix& rows, const ShapConfig& config);

// Exact Shapley values of an n-player game given v over coalition bitmasks.
// phi_j = sum over S not containing j of |S|!(n-|S|-1)!/n! (v(S+j) - v(S)).
std::vector<double> shapley_values(
    std::size_t n_players, const std::function<double(std::uint32_t)>& value);

struct InterventionalResult {
  std::vector<double> coalition_values;  // indexed by bitmask
  std::vector<double> phi;
};

// v(S) = mean over background rows b of model(x on S, b elsewhere).
// Works for any dimension up to 20; explain_shap is the 3-feature entry.
InterventionalResult interventional_shapley(
    const std::function<double(std::span<const double>)>& model,
    std::span<const double> x, std::span<const std::vector<double>> background);

// Background rows beyond cfg.background_size are subsampled with
// select_background first.
ShapleyExplanation explain_shap(const Predictor& model, const FeatureVector& x,
                                const FeatureMatrix& background,
                                const ShapConfig& config = {});

// Simplified ranks |phi|; detailed adds per-point running totals from the
// base value to the prediction, in ranked order.
Explanation shap_variant(const ShapleyExplanation& shap, Variant variant);

}  // namespace axai

#endif  // AXAI_SHAPLEY_HPP_
