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

#include <bit>
#include <numeric>
#include <string>

#include "axai/random.hpp"

namespace axai {

namespace {

constexpr std::size_t kMaxPlayers = 20;

// |S|!(n-|S|-1)!/n! == 1 / (n * C(n-1, |S|)); exact in double for n <= 20.
std::vector<double> coalition_weights(std::size_t n) {
  std::vector<double> weights(n);
  double binom = 1.0;  // C(n-1, s)
  for (std::size_t s = 0; s < n; ++s) {
    weights[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  return weights;
}

}  // namespace

FeatureMatrix select_background(const FeatureMatrix& rows, const ShapConfig& config) {
  if (config.background_size == 0) {
    throw ExplainError(ExplainErrorCode::kInvalidConfig, "background_size must be >= 1");
  }
  if (rows.size() <= config.background_size) return rows;
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.background_seed);
  FeatureMatrix out;
  out.reserve(config.background_size);
  for (std::size_t i = 0; i < config.background_size; ++i) {
    const std::size_t j = i + rng.uniform_index(order.size() - i);
    std::swap(order[i], order[j]);
    out.push_back(rows[order[i]]);
  }
  return out;
}

std::vector<double> shapley_values(
    std::size_t n_players, const std::function<double(std::uint32_t)>& value) {
  if (n_players == 0 || n_players > kMaxPlayers) {
    throw ExplainError(ExplainErrorCode::kInvalidConfig,
                       "exact enumeration supports 1.." + std::to_string(kMaxPlayers) +
                           " players");
  }
  const std::uint32_t n_masks = 1u << n_players;
  std::vector<double> v(n_masks);
  for (std::uint32_t mask = 0; mask < n_masks; ++mask) v[mask] = value(mask);

  const std::vector<double> weights = coalition_weights(n_players);
  std::vector<double> phi(n_players, 0.0);
  for (std::size_t j = 0; j < n_players; ++j) {
    const std::uint32_t bit = 1u << j;
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      phi[j] += weights[size] * (v[mask | bit] - v[mask]);
    }
  }
  return phi;
}

InterventionalResult interventional_shapley(
    const std::function<double(std::span<const double>)>& model,
    std::span<const double> x, std::span<const std::vector<double>> background) {
  if (background.empty()) {
    throw ExplainError(ExplainErrorCode::kEmptyBackground,
                       "interventional Shapley values need background rows");
  }
  const std::size_t n = x.size();
  for (const auto& row : background) {
    if (row.size() != n) {
      throw ExplainError(ExplainErrorCode::kInvalidConfig,
                         "background row width differs from instance width");
    }
  }
  InterventionalResult result;
  std::vector<double> composite(n);
  auto value = [&](std::uint32_t mask) {
    double sum = 0.0;
    for (const auto& row : background) {
      for (std::size_t j = 0; j < n; ++j) {
        composite[j] = (mask >> j) & 1u ? x[j] : row[j];
      }
      sum += model(composite);
    }
    const double v = sum / static_cast<double>(background.size());
    result.coalition_values.push_back(v);
    return v;
  };
  result.phi = shapley_values(n, value);
  return result;
}

ShapleyExplanation explain_shap(const Predictor& model, const FeatureVector& x,
                                const FeatureMatrix& background,
                                const ShapConfig& config) {
  if (background.empty()) {
    throw ExplainError(ExplainErrorCode::kEmptyBackground,
                       "interventional Shapley values need background rows");
  }
  const FeatureMatrix reference = select_background(background, config);
  std::vector<std::vector<double>> rows;
  rows.reserve(reference.size());
  for (const FeatureVector& r : reference) rows.emplace_back(r.values.begin(), r.values.end());

  auto evaluate = [&model](std::span<const double> values) {
    FeatureVector v;
    for (std::size_t j = 0; j < kNumFeatures; ++j) v[j] = values[j];
    return model.predict(v);
  };
  const InterventionalResult game = interventional_shapley(evaluate, x.values, rows);

  ShapleyExplanation out;
  out.base_value = game.coalition_values.front();
  for (std::size_t j = 0; j < kNumFeatures; ++j) out.phi[j] = game.phi[j];
  out.instance = x;
  out.predicted = model.predict(x);
  return out;
}

Explanation shap_variant(const ShapleyExplanation& shap, Variant variant) {
  Explanation e;
  e.method = make_method(MethodFamily::kShap, variant);
  e.instance = shap.instance;
  e.predicted = shap.predicted;
  std::vector<Attribution> items;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    items.push_back({j, shap.instance[j], shap.phi[j]});
  }
  e.ranked = rank_attributions(std::move(items));
  if (variant == Variant::kDetailed) {
    ShapDetail detail;
    detail.base_value = shap.base_value;
    double running = shap.base_value;
    for (const Attribution& a : e.ranked) {
      running += a.contribution;
      detail.points.push_back({a, running});
    }
    e.shap = std::move(detail);
  }
  return e;
}

}  // namespace axai
