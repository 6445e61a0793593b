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

#include "axai/explanation.hpp"

#include <algorithm>
#include <cmath>

namespace axai {

std::string_view to_string(ExplanationMethod method) {
  switch (method) {
    case ExplanationMethod::kLimeSimplified: return "lime-simplified";
    case ExplanationMethod::kLimeDetailed: return "lime-detailed";
    case ExplanationMethod::kShapSimplified: return "shap-simplified";
    case ExplanationMethod::kShapDetailed: return "shap-detailed";
  }
  return "unknown";
}

std::optional<ExplanationMethod> parse_method(std::string_view name) {
  for (ExplanationMethod m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

MethodFamily family_of(ExplanationMethod method) {
  return method == ExplanationMethod::kLimeSimplified ||
                 method == ExplanationMethod::kLimeDetailed
             ? MethodFamily::kLime
             : MethodFamily::kShap;
}

Variant variant_of(ExplanationMethod method) {
  return method == ExplanationMethod::kLimeDetailed ||
                 method == ExplanationMethod::kShapDetailed
             ? Variant::kDetailed
             : Variant::kSimplified;
}

ExplanationMethod make_method(MethodFamily family, Variant variant) {
  if (family == MethodFamily::kLime) {
    return variant == Variant::kDetailed ? ExplanationMethod::kLimeDetailed
                                         : ExplanationMethod::kLimeSimplified;
  }
  return variant == Variant::kDetailed ? ExplanationMethod::kShapDetailed
                                       : ExplanationMethod::kShapSimplified;
}

std::string_view to_string(ExplainErrorCode code) {
  switch (code) {
    case ExplainErrorCode::kInvalidConfig: return "InvalidConfig";
    case ExplainErrorCode::kDegenerateStats: return "DegenerateStats";
    case ExplainErrorCode::kEmptyBackground: return "EmptyBackground";
    case ExplainErrorCode::kMethodMismatch: return "MethodMismatch";
  }
  return "Unknown";
}

ExplainError::ExplainError(ExplainErrorCode code, const std::string& detail)
    : CodedError(code, std::string(to_string(code)) + ": " + detail) {}

std::vector<double> ShapDetail::running_sums() const {
  std::vector<double> sums{base_value};
  for (const ShapPoint& p : points) sums.push_back(p.running_total);
  return sums;
}

std::vector<Attribution> rank_attributions(std::vector<Attribution> items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const Attribution& a, const Attribution& b) {
                     return std::abs(a.contribution) > std::abs(b.contribution);
                   });
  return items;
}

}  // namespace axai
