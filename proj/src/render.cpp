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

#include "axai/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace axai {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFlowUnit = "vehicles per hour";

std::string_view method_title(ExplanationMethod method) {
  switch (method) {
    case ExplanationMethod::kLimeSimplified: return "LIME simplified explanation";
    case ExplanationMethod::kLimeDetailed: return "LIME detailed explanation";
    case ExplanationMethod::kShapSimplified: return "SHAP simplified explanation";
    case ExplanationMethod::kShapDetailed: return "SHAP detailed explanation";
  }
  return "explanation";
}

std::string effect_phrase(double c) {
  if (c == 0.0) return "had no measurable effect";
  const std::string amount = format_one_decimal(std::abs(c));
  const std::string_view verb = c > 0.0 ? "increases" : "decreases";
  if (amount == "0.0") {
    return "slightly " + std::string(verb) + " the predicted flow, by less than 0.1";
  }
  return std::string(verb) + " the predicted flow by " + amount;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += (i + 1 == names.size()) ? " and " : ", ";
    out += names[i];
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string item_phrase(const Attribution& a) {
  return std::string(feature_label(a.feature)) + " (" +
         format_feature_value(a.feature, a.raw_value) + ") " +
         effect_phrase(a.contribution);
}

void check_method(const Explanation& e, ExplanationMethod method) {
  if (family_of(e.method) != family_of(method)) {
    throw ExplainError(ExplainErrorCode::kMethodMismatch,
                       "explanation is " + std::string(to_string(e.method)) +
                           ", requested " + std::string(to_string(method)));
  }
  if (method == ExplanationMethod::kLimeDetailed && !e.lime) {
    throw ExplainError(ExplainErrorCode::kMethodMismatch,
                       "lime-detailed needs the detailed surrogate payload");
  }
  if (method == ExplanationMethod::kShapDetailed && !e.shap) {
    throw ExplainError(ExplainErrorCode::kMethodMismatch,
                       "shap-detailed needs the detailed Shapley payload");
  }
}

std::optional<std::vector<std::string>> group_names(
    const std::optional<std::vector<Attribution>>& group) {
  if (!group || group->empty()) return std::nullopt;
  std::vector<std::string> names;
  for (const Attribution& a : *group) names.emplace_back(kFeatureNames[a.feature]);
  return names;
}

std::vector<std::string> group_labels(const std::vector<Attribution>& group) {
  std::vector<std::string> labels;
  for (const Attribution& a : group) labels.emplace_back(feature_label(a.feature));
  return labels;
}

Rgb color_for(const PaletteSpec& palette, double c) {
  if (c > 0.0) return palette.positive;
  if (c < 0.0) return palette.negative;
  return palette.neutral;
}

Json to_json(const Rgb& c) { return c.hex(); }

Json to_json(const PaletteSpec& p) {
  Json pairs = Json::array();
  for (const ColorPair& pair : p.pairs()) {
    pairs.push_back({{"role", pair.role},
                     {"foreground", pair.foreground.hex()},
                     {"background", pair.background.hex()},
                     {"contrast_ratio", contrast_ratio(pair.foreground, pair.background)}});
  }
  return Json{{"name", p.name},
              {"background", to_json(p.background)},
              {"text", to_json(p.text)},
              {"positive", to_json(p.positive)},
              {"negative", to_json(p.negative)},
              {"neutral", to_json(p.neutral)},
              {"pairs", std::move(pairs)}};
}

}  // namespace

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::kIncreases: return "increases";
    case Direction::kDecreases: return "decreases";
    case Direction::kNeutral: return "neutral";
  }
  return "neutral";
}

Direction direction_of(double contribution) {
  if (contribution > 0.0) return Direction::kIncreases;
  if (contribution < 0.0) return Direction::kDecreases;
  return Direction::kNeutral;
}

SonificationTrack sonify(std::span<const double> contributions,
                         const SonificationConfig& config) {
  SonificationTrack track;
  double max_abs = 0.0;
  for (double c : contributions) max_abs = std::max(max_abs, std::abs(c));
  const double span = config.max_hz - config.min_hz;
  for (double c : contributions) {
    Tone tone;
    tone.duration_ms = config.duration_ms;
    if (max_abs == 0.0) {
      tone.frequency_hz = config.min_hz;
      tone.pan = 0.0;
    } else {
      tone.frequency_hz = config.min_hz + span * (std::abs(c) / max_abs);
      tone.pan = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
    }
    track.tones.push_back(tone);
  }
  return track;
}

// ---------------------------------------------------------------------------
// Colour

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", r, g, b);
  return buf;
}

Rgb Rgb::parse(std::string_view hex) {
  if (hex.size() != 7 || hex[0] != '#') {
    throw std::invalid_argument("colour must look like #RRGGBB");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit in colour");
  };
  auto byte = [&](std::size_t i) {
    return static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1]));
  };
  return Rgb{byte(1), byte(3), byte(5)};
}

double relative_luminance(Rgb color) {
  auto linear = [](std::uint8_t channel) {
    const double c = channel / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  return 0.2126 * linear(color.r) + 0.7152 * linear(color.g) +
         0.0722 * linear(color.b);
}

double contrast_ratio(Rgb foreground, Rgb background) {
  const double a = relative_luminance(foreground);
  const double b = relative_luminance(background);
  const double lighter = std::max(a, b);
  const double darker = std::min(a, b);
  return (lighter + 0.05) / (darker + 0.05);
}

std::vector<ColorPair> PaletteSpec::pairs() const {
  return {{"text", text, background},
          {"positive", positive, background},
          {"negative", negative, background},
          {"neutral", neutral, background}};
}

std::span<const PaletteSpec> shipped_palettes() {
  static const std::array<PaletteSpec, 2> palettes = {
      PaletteSpec{"high-contrast-light", Rgb::parse("#FFFFFF"), Rgb::parse("#000000"),
                  Rgb::parse("#005A9C"), Rgb::parse("#B3261E"), Rgb::parse("#595959")},
      PaletteSpec{"high-contrast-dark", Rgb::parse("#000000"), Rgb::parse("#FFFFFF"),
                  Rgb::parse("#66B2FF"), Rgb::parse("#FF8A80"), Rgb::parse("#BDBDBD")},
  };
  return palettes;
}

const PaletteSpec& default_palette() { return shipped_palettes()[0]; }

bool AriaSpec::has_section(std::string_view id) const {
  return std::any_of(reading_order.begin(), reading_order.end(),
                     [id](const AriaSection& s) { return s.id == id; });
}

// ---------------------------------------------------------------------------
// Text

std::string_view feature_label(std::size_t feature) {
  static constexpr std::array<std::string_view, kNumFeatures> kLabels = {
      "time of day", "occupancy", "speed"};
  return feature < kLabels.size() ? kLabels[feature] : "feature";
}

std::string format_one_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  std::string s(buf);
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string format_feature_value(std::size_t feature, double value) {
  switch (static_cast<Feature>(feature)) {
    case Feature::kInterval: {
      const auto minutes = static_cast<long long>(std::llround(value / 60.0));
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%02lld:%02lld", minutes / 60, minutes % 60);
      return buf;
    }
    case Feature::kOcc:
      return format_one_decimal(value * 100.0) + "%";
    case Feature::kSpeed:
      return format_one_decimal(value) + " km/h";
  }
  return format_one_decimal(value);
}

std::string describe_text(const Explanation& e, ExplanationMethod method) {
  check_method(e, method);
  const std::vector<Attribution> ranked = rank_attributions(e.ranked);
  const std::size_t n_named = std::min<std::size_t>(3, ranked.size());
  const std::vector<Attribution> top(ranked.begin(),
                                     ranked.begin() + static_cast<std::ptrdiff_t>(n_named));
  const bool all_zero = std::all_of(top.begin(), top.end(), [](const Attribution& a) {
    return a.contribution == 0.0;
  });

  std::string text = "Predicted traffic flow is " + format_one_decimal(e.predicted) +
                     " " + std::string(kFlowUnit) + ". " +
                     capitalize(std::string(method_title(method)));
  const std::string no_effect = join_names(group_labels(top)) +
                                " had no measurable effect on this prediction.";

  if (method == ExplanationMethod::kShapDetailed) {
    const ShapDetail& detail = *e.shap;
    text += ": starting from the average prediction of " +
            format_one_decimal(detail.base_value) + " " + std::string(kFlowUnit) + ", ";
    if (all_zero) return text + no_effect;
    for (std::size_t i = 0; i < std::min(n_named, detail.points.size()); ++i) {
      const ShapPoint& p = detail.points[i];
      if (i > 0) text += "; ";
      text += item_phrase(p.attribution) + ", giving " +
              format_one_decimal(p.running_total);
    }
    return text + ".";
  }

  if (method == ExplanationMethod::kLimeDetailed) {
    const LimeDetail& detail = *e.lime;
    text += ": a local linear model fitted around this reading has an intercept of " +
            format_one_decimal(detail.intercept) + " " + std::string(kFlowUnit) +
            " and a fidelity of " + format_one_decimal(detail.fidelity_r2 * 100.0) +
            " percent. ";
    if (all_zero) return text + capitalize(no_effect);
    text += "Most influential feature first: ";
    for (std::size_t i = 0; i < n_named; ++i) {
      if (i > 0) text += "; ";
      text += item_phrase(top[i]);
    }
    text += ".";
    if (detail.positive) {
      text += " Features raising the prediction: " + join_names(group_labels(*detail.positive)) + ".";
    }
    if (detail.negative) {
      text += " Features lowering the prediction: " + join_names(group_labels(*detail.negative)) + ".";
    }
    return text;
  }

  if (all_zero) return text + ": " + no_effect;
  text += ", most influential feature first: ";
  for (std::size_t i = 0; i < n_named; ++i) {
    if (i > 0) text += "; ";
    text += item_phrase(top[i]);
  }
  return text + ".";
}

// ---------------------------------------------------------------------------
// Render

AccessibleExplanation render(const Explanation& e, ExplanationMethod method) {
  check_method(e, method);
  const std::vector<Attribution> ranked = rank_attributions(e.ranked);
  const PaletteSpec& palette = default_palette();

  AccessibleExplanation out;
  out.method = method;
  out.summary_text = describe_text(e, method);

  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const Attribution& a = ranked[i];
    RankedItem item;
    item.feature = std::string(kFeatureNames[a.feature]);
    item.label = std::string(feature_label(a.feature));
    item.raw_value = a.raw_value;
    item.value_text = format_feature_value(a.feature, a.raw_value);
    item.contribution = a.contribution;
    item.direction = direction_of(a.contribution);
    item.description = item.label + ", " + item.value_text + ", " +
                       effect_phrase(a.contribution);
    if (method == ExplanationMethod::kShapDetailed && i < e.shap->points.size()) {
      item.description +=
          ", running total " + format_one_decimal(e.shap->points[i].running_total);
    }
    out.ranked_items.push_back(std::move(item));
  }

  ChartSpec& chart = out.chart_spec;
  chart.palette = palette;
  chart.title = capitalize(std::string(method_title(method))) +
                " for a predicted flow of " + format_one_decimal(e.predicted) + " " +
                std::string(kFlowUnit);
  chart.x_label = "Contribution to predicted flow (" + std::string(kFlowUnit) + ")";
  chart.y_label = "Feature";
  chart.kind = method == ExplanationMethod::kShapDetailed ? "waterfall" : "bar";
  for (std::size_t i = 0; i < out.ranked_items.size(); ++i) {
    const RankedItem& item = out.ranked_items[i];
    chart.points.push_back({"item-" + std::to_string(i), item.label, item.contribution,
                            color_for(palette, item.contribution), item.description});
  }

  AriaSpec& aria = out.aria;
  aria.region_label = capitalize(std::string(method_title(method))) +
                      " of the predicted traffic flow";
  aria.reading_order.push_back({"summary", "status", "Summary"});

  if (method == ExplanationMethod::kLimeDetailed) {
    const LimeDetail& d = *e.lime;
    RenderedDetail detail;
    detail.kind = "lime";
    detail.base_or_intercept = d.intercept;
    detail.fidelity = d.fidelity_r2;
    detail.groups = SignGroups{group_names(d.positive), group_names(d.negative),
                               group_names(d.neutral)};
    out.detail = std::move(detail);
    aria.reading_order.push_back({"surrogate-fit", "group", "Local model fit"});
    if (d.positive) {
      aria.reading_order.push_back({"positive-contributions", "list", "Positive contributions"});
    }
    if (d.negative) {
      aria.reading_order.push_back({"negative-contributions", "list", "Negative contributions"});
    }
    if (d.neutral) {
      aria.reading_order.push_back({"no-effect", "list", "Features with no effect"});
    }
  } else if (method == ExplanationMethod::kShapDetailed) {
    const ShapDetail& d = *e.shap;
    RenderedDetail detail;
    detail.kind = "shap";
    detail.base_or_intercept = d.base_value;
    detail.running_sums = d.running_sums();
    out.detail = std::move(detail);
    chart.baseline = d.base_value;

    std::vector<double> contributions;
    for (const RankedItem& item : out.ranked_items) contributions.push_back(item.contribution);
    out.sonification = sonify(contributions);

    aria.reading_order.push_back({"base-value", "note", "Average prediction"});
    aria.reading_order.push_back(
        {"data-points", "list", "Data points, step with the arrow keys"});
  } else {
    aria.reading_order.push_back({"ranked-items", "list", "Features, most influential first"});
  }
  aria.reading_order.push_back({"chart", "img", chart.title});

  for (std::size_t i = 0; i < out.ranked_items.size(); ++i) {
    aria.descriptions.push_back({"item-" + std::to_string(i), out.ranked_items[i].description});
  }
  std::string chart_text = (chart.kind == "waterfall" ? "Waterfall" : "Bar") +
                           std::string(" chart of ") + std::to_string(chart.points.size()) +
                           " feature contributions.";
  if (!out.ranked_items.empty()) {
    chart_text += " Largest: " + out.ranked_items.front().label + ", " +
                  format_one_decimal(out.ranked_items.front().contribution) + ".";
  }
  aria.descriptions.push_back({"chart", std::move(chart_text)});
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_json(const AccessibleExplanation& x) {
  Json items = Json::array();
  for (const RankedItem& item : x.ranked_items) {
    items.push_back({{"feature", item.feature},
                     {"label", item.label},
                     {"raw_value", item.raw_value},
                     {"value_text", item.value_text},
                     {"contribution", item.contribution},
                     {"direction", to_string(item.direction)},
                     {"description", item.description}});
  }

  Json detail = nullptr;
  if (x.detail) {
    detail = Json{{"kind", x.detail->kind},
                  {"base_or_intercept", x.detail->base_or_intercept}};
    if (x.detail->fidelity) detail["fidelity"] = *x.detail->fidelity;
    if (x.detail->groups) {
      Json groups = Json::object();
      if (x.detail->groups->positive) groups["positive"] = *x.detail->groups->positive;
      if (x.detail->groups->negative) groups["negative"] = *x.detail->groups->negative;
      if (x.detail->groups->neutral) groups["neutral"] = *x.detail->groups->neutral;
      detail["groups"] = std::move(groups);
    }
    if (x.detail->running_sums) detail["running_sums"] = *x.detail->running_sums;
  }

  Json sonification = nullptr;
  if (x.sonification) {
    Json tones = Json::array();
    for (const Tone& t : x.sonification->tones) {
      tones.push_back({{"frequency", t.frequency_hz},
                       {"duration_ms", t.duration_ms},
                       {"pan", t.pan}});
    }
    sonification = Json{{"tones", std::move(tones)}};
  }

  const ChartSpec& c = x.chart_spec;
  Json points = Json::array();
  for (const ChartPoint& p : c.points) {
    points.push_back({{"id", p.id},
                      {"label", p.label},
                      {"value", p.value},
                      {"color", p.color.hex()},
                      {"description", p.description}});
  }
  Json chart{{"kind", c.kind},
             {"title", c.title},
             {"x_label", c.x_label},
             {"y_label", c.y_label},
             {"baseline", c.baseline ? Json(*c.baseline) : Json(nullptr)},
             {"points", std::move(points)},
             {"palette", to_json(c.palette)}};

  Json order = Json::array();
  for (const AriaSection& s : x.aria.reading_order) {
    order.push_back({{"id", s.id}, {"role", s.role}, {"label", s.label}});
  }
  Json descriptions = Json::array();
  for (const AriaDescription& d : x.aria.descriptions) {
    descriptions.push_back({{"target", d.target}, {"text", d.text}});
  }

  Json doc{{"method", to_string(x.method)},
           {"summary_text", x.summary_text},
           {"ranked_items", std::move(items)},
           {"detail", std::move(detail)},
           {"sonification", std::move(sonification)},
           {"chart_spec", std::move(chart)},
           {"aria",
            {{"region_label", x.aria.region_label},
             {"reading_order", std::move(order)},
             {"descriptions", std::move(descriptions)}}}};
  return doc.dump();
}

std::string wrap_text(std::string_view text, std::size_t width,
                      std::string_view first_prefix, std::string_view rest_prefix) {
  if (width <= std::max(first_prefix.size(), rest_prefix.size())) {
    throw std::invalid_argument("wrap width must exceed the prefix length");
  }
  std::string out;
  std::string line(first_prefix);
  bool line_has_word = false;
  auto flush = [&] {
    out += line;
    out += '\n';
    line = std::string(rest_prefix);
    line_has_word = false;
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view word = text.substr(pos, end - pos);
    pos = end;
    const std::size_t needed = line.size() + (line_has_word ? 1 : 0) + word.size();
    if (line_has_word && needed > width) flush();
    while (line.size() + word.size() > width) {
      const std::size_t room = width > line.size() ? width - line.size() : 0;
      if (room == 0 || line_has_word) {
        flush();
        continue;
      }
      line += word.substr(0, room);
      word.remove_prefix(room);
      flush();
    }
    if (word.empty()) continue;
    if (line_has_word) line += ' ';
    line += word;
    line_has_word = true;
  }
  if (line_has_word) flush();
  return out;
}

std::string to_plain_text(const AccessibleExplanation& x, std::size_t width) {
  std::string out = wrap_text(x.summary_text, width);
  out += '\n';
  out += "Features, most influential first:\n";
  for (const RankedItem& item : x.ranked_items) {
    out += wrap_text(item.description, width, "- ", "  ");
  }
  return out;
}

}  // namespace axai
