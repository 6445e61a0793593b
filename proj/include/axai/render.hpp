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

#ifndef AXAI_RENDER_HPP_
#define AXAI_RENDER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "axai/explanation.hpp"

namespace axai {

enum class Direction { kIncreases, kDecreases, kNeutral };

std::string_view to_string(Direction direction);

// Exact sign: zero is neutral.
Direction direction_of(double contribution);

struct RankedItem {
  std::string feature;      // canonical name, e.g. "occ"
  std::string label;        // spoken name, e.g. "occupancy"
  double raw_value = 0.0;
  std::string value_text;   // e.g. "20.0%"
  double contribution = 0.0;
  Direction direction = Direction::kNeutral;
  std::string description;  // one self-contained sentence fragment
};

struct Tone {
  double frequency_hz = 0.0;
  int duration_ms = 0;
  double pan = 0.0;
};

struct SonificationTrack {
  std::vector<Tone> tones;
};

struct SonificationConfig {
  double min_hz = 220.0;
  double max_hz = 880.0;
  int duration_ms = 300;
};

// frequency = min_hz + (max_hz - min_hz) * |c| / max|c|; pan is the sign of
// c. When every contribution is zero all tones sit at min_hz with pan 0.
SonificationTrack sonify(std::span<const double> ranked_contributions,
                         const SonificationConfig& config = {});

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;  // "#RRGGBB"
  static Rgb parse(std::string_view hex);

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// WCAG 2.x relative luminance and contrast ratio.
double relative_luminance(Rgb color);
double contrast_ratio(Rgb foreground, Rgb background);

struct ColorPair {
  std::string role;
  Rgb foreground;
  Rgb background;
};

struct PaletteSpec {
  std::string name;
  Rgb background;
  Rgb text;
  Rgb positive;
  Rgb negative;
  Rgb neutral;

  // Every foreground used on this palette's background.
  std::vector<ColorPair> pairs() const;
};

std::span<const PaletteSpec> shipped_palettes();
const PaletteSpec& default_palette();

struct ChartPoint {
  std::string id;
  std::string label;
  double value = 0.0;
  Rgb color;
  std::string description;
};

// Declarative chart; the client draws it.
struct ChartSpec {
  std::string kind;  // "bar" or "waterfall"
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<double> baseline;
  std::vector<ChartPoint> points;
  PaletteSpec palette;
};

struct AriaSection {
  std::string id;
  std::string role;
  std::string label;
};

struct AriaDescription {
  std::string target;
  std::string text;
};

struct AriaSpec {
  std::string region_label;
  std::vector<AriaSection> reading_order;
  std::vector<AriaDescription> descriptions;

  bool has_section(std::string_view id) const;
};

struct SignGroups {
  std::optional<std::vector<std::string>> positive;  // feature names
  std::optional<std::vector<std::string>> negative;
  std::optional<std::vector<std::string>> neutral;
};

struct RenderedDetail {
  std::string kind;  // "lime" or "shap"
  double base_or_intercept = 0.0;
  std::optional<double> fidelity;                   // lime
  std::optional<SignGroups> groups;                 // lime
  std::optional<std::vector<double>> running_sums;  // shap, length n + 1
};

struct AccessibleExplanation {
  ExplanationMethod method = ExplanationMethod::kShapSimplified;
  std::string summary_text;
  std::vector<RankedItem> ranked_items;
  std::optional<RenderedDetail> detail;          // detailed methods only
  std::optional<SonificationTrack> sonification;  // shap-detailed only
  ChartSpec chart_spec;
  AriaSpec aria;
};

std::string_view feature_label(std::size_t feature);
// "08:00" for interval, "20.0%" for occ, "50.0 km/h" for speed.
std::string format_feature_value(std::size_t feature, double value);
// One decimal place, never "-0.0".
std::string format_one_decimal(double value);

// Deterministic template text: prediction, base or intercept where the
// method has one, and the top three features with direction verbs.
std::string describe_text(const Explanation& explanation, ExplanationMethod method);

// Throws ExplainError(kMethodMismatch) when the explanation does not carry
// what `method` needs.
AccessibleExplanation render(const Explanation& explanation,
                             ExplanationMethod method);

// Fixed-key-order JSON document. Byte-identical for equal inputs.
std::string to_json(const AccessibleExplanation& explanation);

// Terminal rendering: wrapped summary then one "- " line per ranked item.
// Lines never exceed `width`; no tabs, box drawing or escape codes.
std::string to_plain_text(const AccessibleExplanation& explanation,
                          std::size_t width = 80);

// Every output line ends in '\n'.
std::string wrap_text(std::string_view text, std::size_t width,
                      std::string_view first_prefix = "",
                      std::string_view rest_prefix = "");

}  // namespace axai

#endif  // AXAI_RENDER_HPP_
