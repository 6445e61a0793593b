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

#ifndef AXAI_TESTS_SUPPORT_RENDER_CONTRACTS_HPP_
#define AXAI_TESTS_SUPPORT_RENDER_CONTRACTS_HPP_

#include <cmath>
#include <string>

#include "axai/lime.hpp"
#include "axai/random.hpp"
#include "axai/render.hpp"
#include "axai/shapley.hpp"

namespace axai::testing {

struct RandomCase {
  Explanation explanation;
  ExplanationMethod method = ExplanationMethod::kShapSimplified;
  std::array<double, kNumFeatures> contributions{};
};

// Contributions mix exact zeros, small integers (ties) and values spread over
// five orders of magnitude.
inline RandomCase random_case(Rng& rng) {
  RandomCase c;
  for (double& v : c.contributions) {
    const auto kind = rng.uniform_index(6);
    if (kind == 0) v = 0.0;
    else if (kind == 1) v = std::round(rng.normal() * 3.0);
    else v = rng.normal() * std::pow(10.0, static_cast<double>(rng.uniform_index(5)) - 1.0);
  }
  c.method = kAllMethods[rng.uniform_index(kAllMethods.size())];
  const FeatureVector x{{300.0 * static_cast<double>(rng.uniform_index(288)), rng.uniform01(),
                         120.0 * rng.uniform01()}};
  if (family_of(c.method) == MethodFamily::kShap) {
    ShapleyExplanation s;
    s.phi = c.contributions;
    s.base_value = 500.0 * rng.uniform01();
    s.predicted = s.base_value + c.contributions[0] + c.contributions[1] + c.contributions[2];
    s.instance = x;
    c.explanation = shap_variant(s, variant_of(c.method));
  } else {
    SurrogateExplanation s;
    s.attributions = c.contributions;
    s.intercept = 500.0 * rng.uniform01();
    s.fidelity_r2 = rng.uniform01();
    s.predicted = 500.0 * rng.uniform01();
    s.instance = x;
    c.explanation = lime_variant(s, variant_of(c.method));
  }
  return c;
}

// Checks the rendering contracts on one case. Returns an empty string when
// every contract holds, otherwise the first violation.
inline std::string check_render_contracts(const RandomCase& c) {
  const AccessibleExplanation a = render(c.explanation, c.method);
  const auto& items = a.ranked_items;
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (std::fabs(items[i - 1].contribution) < std::fabs(items[i].contribution)) {
      return "ranked items out of order";
    }
  }
  bool any_negative = false;
  for (double v : c.contributions) any_negative = any_negative || v < 0.0;
  if (c.method == ExplanationMethod::kLimeDetailed) {
    if (a.aria.has_section("negative-contributions") != any_negative ||
        !a.detail || !a.detail->groups ||
        a.detail->groups->negative.has_value() != any_negative) {
      return "negative group does not match the sign of the contributions";
    }
  }
  if (a.detail.has_value() != (variant_of(c.method) == Variant::kDetailed)) {
    return "detail presence does not match the variant";
  }
  if (a.sonification.has_value() != (c.method == ExplanationMethod::kShapDetailed)) {
    return "sonification presence does not match the method";
  }
  if (a.sonification) {
    const auto& tones = a.sonification->tones;
    if (tones.size() != items.size()) return "one tone per item expected";
    for (std::size_t i = 0; i < tones.size(); ++i) {
      if (!(tones[i].frequency_hz >= 220.0 && tones[i].frequency_hz <= 880.0)) {
        return "tone frequency out of range";
      }
      const double ci = items[i].contribution;
      if (tones[i].pan != (ci > 0.0 ? 1.0 : (ci < 0.0 ? -1.0 : 0.0))) return "pan mismatch";
      for (std::size_t j = 0; j < tones.size(); ++j) {
        if (std::fabs(ci) > std::fabs(items[j].contribution) + 1e-12 &&
            !(tones[i].frequency_hz > tones[j].frequency_hz)) {
          return "frequency not strictly monotone in magnitude";
        }
      }
    }
  }
  if (a.summary_text.empty() ||
      a.summary_text.find(format_one_decimal(c.explanation.predicted)) == std::string::npos) {
    return "summary does not state the prediction";
  }
  if (to_json(a) != to_json(render(c.explanation, c.method))) return "render is not pure";
  return "";
}

}  // namespace axai::testing

#endif  // AXAI_TESTS_SUPPORT_RENDER_CONTRACTS_HPP_
