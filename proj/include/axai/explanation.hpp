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

#ifndef AXAI_EXPLANATION_HPP_
#define AXAI_EXPLANATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axai/dataset.hpp"
#include "axai/error.hpp"

namespace axai {

// The four user-facing explanation modes.
enum class ExplanationMethod {
  kLimeSimplified,
  kLimeDetailed,
  kShapSimplified,
  kShapDetailed,
};

enum class MethodFamily { kLime, kShap };
enum class Variant { kSimplified, kDetailed };

inline constexpr std::array<ExplanationMethod, 4> kAllMethods = {
    ExplanationMethod::kLimeSimplified, ExplanationMethod::kLimeDetailed,
    ExplanationMethod::kShapSimplified, ExplanationMethod::kShapDetailed};

// "lime-simplified", "lime-detailed", "shap-simplified", "shap-detailed".
std::string_view to_string(ExplanationMethod method);
std::optional<ExplanationMethod> parse_method(std::string_view name);
MethodFamily family_of(ExplanationMethod method);
Variant variant_of(ExplanationMethod method);
ExplanationMethod make_method(MethodFamily family, Variant variant);

enum class ExplainErrorCode {
  kInvalidConfig,
  kDegenerateStats,
  kEmptyBackground,
  kMethodMismatch,
};

std::string_view to_string(ExplainErrorCode code);

class ExplainError : public CodedError<ExplainErrorCode> {
 public:
  ExplainError(ExplainErrorCode code, const std::string& detail);
};

struct Attribution {
  std::size_t feature = 0;  // index into kFeatureNames
  double raw_value = 0.0;
  double contribution = 0.0;

  friend bool operator==(const Attribution&, const Attribution&) = default;
};

// Detailed local-surrogate payload. Groups hold attributions by exact sign
// and keep the ranked order; an empty group is absent, not empty.
struct LimeDetail {
  double intercept = 0.0;
  double fidelity_r2 = 0.0;
  std::optional<std::vector<Attribution>> positive;
  std::optional<std::vector<Attribution>> negative;
  std::optional<std::vector<Attribution>> neutral;
};

// One keyboard-steppable point of a detailed Shapley explanation.
struct ShapPoint {
  Attribution attribution;
  double running_total = 0.0;  // base value plus this and all earlier phi
};

struct ShapDetail {
  double base_value = 0.0;
  std::vector<ShapPoint> points;  // ranked order

  // base_value followed by each point's running total.
  std::vector<double> running_sums() const;
};

// Method-tagged attribution set, the common input to rendering.
struct Explanation {
  ExplanationMethod method = ExplanationMethod::kShapSimplified;
  FeatureVector instance;
  double predicted = 0.0;
  std::vector<Attribution> ranked;  // non-increasing |contribution|
  std::optional<LimeDetail> lime;   // kLimeDetailed only
  std::optional<ShapDetail> shap;   // kShapDetailed only
};

// Sorts by descending |contribution|; equal magnitudes keep feature order.
std::vector<Attribution> rank_attributions(std::vector<Attribution> items);

}  // namespace axai

#endif  // AXAI_EXPLANATION_HPP_
