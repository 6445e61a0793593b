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

#include "axai/lime.hpp"

#include <cmath>
#include <string>

#include "axai/random.hpp"

namespace axai {

namespace {

void validate(const LimeConfig& config) {
  if (config.n_samples < 10) {
    throw ExplainError(ExplainErrorCode::kInvalidConfig, "n_samples must be >= 10");
  }
  if (!(config.kernel_width > 0.0) || !std::isfinite(config.kernel_width)) {
    throw ExplainError(ExplainErrorCode::kInvalidConfig, "kernel_width must be > 0");
  }
  if (!(config.ridge_lambda >= 0.0) || !std::isfinite(config.ridge_lambda)) {
    throw ExplainError(ExplainErrorCode::kInvalidConfig, "ridge_lambda must be >= 0");
  }
}

double scale_of(const FeatureStats& s) { return s.stddev > 0.0 ? s.stddev : 1.0; }

// Cholesky solve of a small symmetric positive-definite system, in place.
template <std::size_t N>
bool cholesky_solve(std::array<std::array<double, N>, N> a,
                    std::array<double, N>& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
    if (!(d > 0.0)) return false;
    a[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
      a[i][j] = s / a[j][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * b[k];
    b[i] = s / a[i][i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k][i] * b[k];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

double kernel_weight(double squared_distance, double kernel_width) {
  return std::exp(-squared_distance / (kernel_width * kernel_width));
}

LimeDesign sample_lime_design(const Predictor& model, const FeatureVector& x,
                              const StatsTable& stats, const LimeConfig& config) {
  validate(config);
  LimeDesign design;
  bool any_active = false;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    design.active[j] = stats[j].stddev > 0.0;
    any_active = any_active || design.active[j];
    design.standardized_instance[j] = (x[j] - stats[j].mean) / scale_of(stats[j]);
  }
  if (!any_active && !config.allow_constant_fallback) {
    throw ExplainError(ExplainErrorCode::kDegenerateStats,
                       "every feature has zero variance in the training stats");
  }

  const FeatureVector& x_std = design.standardized_instance;
  design.samples.reserve(config.n_samples);
  design.weights.reserve(config.n_samples);
  design.targets.reserve(config.n_samples);
  Rng rng(config.seed);
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    FeatureVector z = x_std;
    if (i > 0) {
      for (std::size_t j = 0; j < kNumFeatures; ++j) {
        const double draw = rng.normal();
        if (design.active[j]) z[j] = draw;
      }
    }
    double d2 = 0.0;
    FeatureVector original;
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      const double diff = z[j] - x_std[j];
      d2 += diff * diff;
      original[j] = design.active[j] ? stats[j].mean + z[j] * scale_of(stats[j])
                                     : x[j];
    }
    design.samples.push_back(z);
    design.weights.push_back(kernel_weight(d2, config.kernel_width));
    design.targets.push_back(model.predict(original));
  }
  return design;
}

RidgeFit fit_weighted_ridge(const LimeDesign& design, double ridge_lambda) {
  const std::size_t n = design.samples.size();
  std::array<std::size_t, kNumFeatures> cols{};
  std::size_t k = 0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    if (design.active[j]) cols[k++] = j;
  }

  // Weighted centering removes the intercept from the penalized system.
  double w_sum = 0.0;
  double y_mean = 0.0;
  std::array<double, kNumFeatures> z_mean{};
  bool constant_target = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = design.weights[i];
    w_sum += w;
    y_mean += w * design.targets[i];
    for (std::size_t c = 0; c < k; ++c) z_mean[c] += w * design.samples[i][cols[c]];
    constant_target = constant_target && design.targets[i] == design.targets[0];
  }
  y_mean = constant_target ? design.targets[0] : y_mean / w_sum;
  for (std::size_t c = 0; c < k; ++c) z_mean[c] /= w_sum;

  std::array<std::array<double, kNumFeatures>, kNumFeatures> gram{};
  std::array<double, kNumFeatures> rhs{};
  for (std::size_t i = 0; i < n; ++i) {
    const double w = design.weights[i];
    const double dy = design.targets[i] - y_mean;
    std::array<double, kNumFeatures> dz{};
    for (std::size_t c = 0; c < k; ++c) dz[c] = design.samples[i][cols[c]] - z_mean[c];
    for (std::size_t a = 0; a < k; ++a) {
      rhs[a] += w * dz[a] * dy;
      for (std::size_t b = 0; b <= a; ++b) gram[a][b] += w * dz[a] * dz[b];
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    gram[a][a] += ridge_lambda;
    for (std::size_t b = 0; b < a; ++b) gram[b][a] = gram[a][b];
  }

  RidgeFit fit;
  if (k > 0 && !cholesky_solve(gram, rhs, k)) {
    throw ExplainError(ExplainErrorCode::kDegenerateStats,
                       "surrogate normal equations are singular");
  }
  fit.intercept = y_mean;
  for (std::size_t c = 0; c < k; ++c) {
    fit.coefficients[cols[c]] = rhs[c];
    fit.intercept -= rhs[c] * z_mean[c];
  }
  return fit;
}

double weighted_r2(const LimeDesign& design, const RidgeFit& fit) {
  const std::size_t n = design.samples.size();
  bool constant_target = true;
  double w_sum = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w_sum += design.weights[i];
    y_mean += design.weights[i] * design.targets[i];
    constant_target = constant_target && design.targets[i] == design.targets[0];
  }
  if (constant_target) return 1.0;
  y_mean /= w_sum;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = fit.intercept;
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      fitted += fit.coefficients[j] * design.samples[i][j];
    }
    const double w = design.weights[i];
    ss_res += w * (design.targets[i] - fitted) * (design.targets[i] - fitted);
    ss_tot += w * (design.targets[i] - y_mean) * (design.targets[i] - y_mean);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

SurrogateExplanation explain_lime(const Predictor& model, const FeatureVector& x,
                                  const StatsTable& stats, const LimeConfig& config) {
  const LimeDesign design = sample_lime_design(model, x, stats, config);
  const RidgeFit fit = fit_weighted_ridge(design, config.ridge_lambda);

  SurrogateExplanation out;
  out.intercept = fit.intercept;
  out.coefficients = fit.coefficients;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    out.attributions[j] = fit.coefficients[j] * design.standardized_instance[j];
  }
  out.fidelity_r2 = weighted_r2(design, fit);
  out.instance = x;
  out.standardized_instance = design.standardized_instance;
  out.predicted = model.predict(x);
  return out;
}

Explanation lime_variant(const SurrogateExplanation& surrogate, Variant variant) {
  Explanation e;
  e.method = make_method(MethodFamily::kLime, variant);
  e.instance = surrogate.instance;
  e.predicted = surrogate.predicted;
  std::vector<Attribution> items;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    items.push_back({j, surrogate.instance[j], surrogate.attributions[j]});
  }
  e.ranked = rank_attributions(std::move(items));
  if (variant == Variant::kDetailed) {
    LimeDetail detail;
    detail.intercept = surrogate.intercept;
    detail.fidelity_r2 = surrogate.fidelity_r2;
    std::vector<Attribution> positive, negative, neutral;
    for (const Attribution& a : e.ranked) {
      if (a.contribution > 0.0) positive.push_back(a);
      else if (a.contribution < 0.0) negative.push_back(a);
      else neutral.push_back(a);
    }
    if (!positive.empty()) detail.positive = std::move(positive);
    if (!negative.empty()) detail.negative = std::move(negative);
    if (!neutral.empty()) detail.neutral = std::move(neutral);
    e.lime = std::move(detail);
  }
  return e;
}

}  // namespace axai
