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

#include "axai/service.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

namespace axai {

namespace {

using Json = nlohmann::ordered_json;

void append_le_double(std::string& out, double value) {
  if (value == 0.0) value = 0.0;  // folds -0.0
  auto bits = std::bit_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xFF));
    bits >>= 8;
  }
}

}  // namespace

const ScenarioMeta& default_scenario() {
  static const ScenarioMeta scenario{
      "Third-Party AI",
      "Descriptive AI",
      "Black-Box AI",
      "Deductive Reasoning",
      "Caroline",
      "A city traffic department forecasts vehicle flow at road sensors so a "
      "traffic manager, who uses a screen reader, can spot likely congestion "
      "and judge the system's suggestions before acting on them."};
  return scenario;
}

// ---------------------------------------------------------------------------
// Cache

CacheKey CacheKey::of(ExplanationMethod method, const FeatureVector& features) {
  std::string bytes(to_string(method));
  for (double v : features.values) append_le_double(bytes, v);
  CacheKey key;
  key.digest_ = sha256(bytes);
  return key;
}

std::size_t CacheKey::Hash::operator()(const CacheKey& key) const {
  std::size_t h = 0;
  std::memcpy(&h, key.digest_.data(), sizeof(h));
  return h;
}

ExplanationCache::Lookup ExplanationCache::get_or_compute(
    const CacheKey& key, const std::function<std::string()>& compute) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      hits_.fetch_add(1);
      return {it->second, true};
    }
  }
  misses_.fetch_add(1);
  auto computed = std::make_shared<const std::string>(compute());
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = entries_.try_emplace(key, std::move(computed));
  return {it->second, false};
}

std::optional<ExplanationCache::Payload> ExplanationCache::find(const CacheKey& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::size_t ExplanationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// Errors

std::string_view to_string(ServiceErrorCode code) {
  switch (code) {
    case ServiceErrorCode::kRowNotFound: return "RowNotFound";
    case ServiceErrorCode::kUnknownMethod: return "UnknownMethod";
    case ServiceErrorCode::kServiceNotReady: return "ServiceNotReady";
  }
  return "Unknown";
}

int http_status(ServiceErrorCode code) {
  switch (code) {
    case ServiceErrorCode::kRowNotFound: return 404;
    case ServiceErrorCode::kUnknownMethod: return 400;
    case ServiceErrorCode::kServiceNotReady: return 503;
  }
  return 500;
}

// ---------------------------------------------------------------------------
// Pipeline

AccessibleExplanation explain_instance(const Forest& model, const FeatureVector& x,
                                       ExplanationMethod method,
                                       const ExplainOptions& options) {
  const Variant variant = variant_of(method);
  if (family_of(method) == MethodFamily::kLime) {
    const SurrogateExplanation surrogate =
        explain_lime(model, x, model.training_stats(), options.lime);
    return render(lime_variant(surrogate, variant), method);
  }
  const ShapleyExplanation shap =
      explain_shap(model, x, model.reference_sample(), options.shap);
  return render(shap_variant(shap, variant), method);
}

std::vector<PredictionRow> prediction_table(const Forest& model, const Dataset& data) {
  std::vector<PredictionRow> rows;
  rows.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const TrafficRecord& r = data.records[i];
    rows.push_back({i, model.predict(features_of(r)), r.city, r.detid, r.speed, r.occ});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Service

ExplainService::ExplainService(ExplainOptions options) : options_(std::move(options)) {}

ExplainService::ExplainService(std::shared_ptr<const Forest> model,
                               std::shared_ptr<const Dataset> data,
                               ExplainOptions options)
    : options_(std::move(options)) {
  install(std::move(model), std::move(data));
}

void ExplainService::install(std::shared_ptr<const Forest> model,
                             std::shared_ptr<const Dataset> data) {
  auto next = std::make_shared<Snapshot>();
  next->model = std::move(model);
  next->data = std::move(data);
  if (next->model && next->data) {
    next->rows = prediction_table(*next->model, *next->data);
    next->features = feature_matrix(*next->data);
  }
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(next);
}

void ExplainService::load_files(const std::string& model_path,
                                const std::string& data_path) {
  {
    std::lock_guard lock(mutex_);
    model_path_ = model_path;
    data_path_ = data_path;
  }
  std::shared_ptr<const Forest> model;
  std::shared_ptr<const Dataset> data;
  std::string error;
  try {
    model = std::make_shared<const Forest>(load_file(model_path));
  } catch (const std::exception& e) {
    error = std::string("model: ") + e.what();
  }
  try {
    data = std::make_shared<const Dataset>(read_csv_file(data_path));
  } catch (const std::exception& e) {
    if (!error.empty()) error += "; ";
    error += std::string("data: ") + e.what();
  }
  install(std::move(model), std::move(data));
  std::lock_guard lock(mutex_);
  last_error_ = std::move(error);
}

void ExplainService::refresh() {
  std::string path;
  std::shared_ptr<const Forest> model;
  {
    std::lock_guard lock(mutex_);
    path = data_path_;
    if (snapshot_) model = snapshot_->model;
  }
  if (path.empty()) {
    throw ServiceError(ServiceErrorCode::kServiceNotReady, "no data file configured");
  }
  auto data = std::make_shared<const Dataset>(read_csv_file(path));
  install(std::move(model), std::move(data));
  std::lock_guard lock(mutex_);
  last_error_.clear();
}

std::shared_ptr<const ExplainService::Snapshot> ExplainService::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::vector<PredictionRow> ExplainService::get_predictions() const {
  const auto snap = snapshot();
  if (!snap || !snap->model || !snap->data) {
    throw ServiceError(ServiceErrorCode::kServiceNotReady, "model or data not loaded");
  }
  return snap->rows;
}

ExplanationCache::Lookup ExplainService::get_explanation(std::size_t row_id,
                                                         std::string_view method_name) {
  const std::optional<ExplanationMethod> method = parse_method(method_name);
  if (!method) {
    throw ServiceError(ServiceErrorCode::kUnknownMethod,
                       "unknown method '" + std::string(method_name) +
                           "'; expected lime-simplified, lime-detailed, "
                           "shap-simplified or shap-detailed");
  }
  const auto snap = snapshot();
  if (!snap || !snap->model || !snap->data) {
    throw ServiceError(ServiceErrorCode::kServiceNotReady, "model or data not loaded");
  }
  if (row_id >= snap->features.size()) {
    throw ServiceError(ServiceErrorCode::kRowNotFound,
                       "row " + std::to_string(row_id) + " not in 0.." +
                           std::to_string(snap->features.size()) + " (exclusive)");
  }
  const FeatureVector& x = snap->features[row_id];
  return cache_.get_or_compute(CacheKey::of(*method, x), [&] {
    return to_json(explain_instance(*snap->model, x, *method, options_));
  });
}

HealthStatus ExplainService::health() const {
  const auto snap = snapshot();
  HealthStatus h;
  h.model_loaded = snap && snap->model;
  h.ready = h.model_loaded && snap->data;
  h.rows = h.ready ? snap->rows.size() : 0;
  h.cache_hits = cache_.hits();
  h.cache_misses = cache_.misses();
  return h;
}

std::string ExplainService::last_error() const {
  std::lock_guard lock(mutex_);
  return last_error_;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const std::vector<PredictionRow>& rows) {
  Json out = Json::array();
  for (const PredictionRow& r : rows) {
    out.push_back({{"row_id", r.row_id},
                   {"pred_flow", r.pred_flow},
                   {"city", r.city},
                   {"detector", r.detector},
                   {"speed", r.speed},
                   {"occupancy", r.occupancy}});
  }
  return out.dump();
}

std::string to_json(const ScenarioMeta& s) {
  return Json{{"impact", s.impact},
              {"function", s.function},
              {"transparency", s.transparency},
              {"reasoning", s.reasoning},
              {"persona_name", s.persona_name},
              {"description", s.description}}
      .dump();
}

std::string to_json(const HealthStatus& h) {
  return Json{{"ready", h.ready},
              {"model_loaded", h.model_loaded},
              {"rows", h.rows},
              {"cache", {{"hits", h.cache_hits}, {"misses", h.cache_misses}}}}
      .dump();
}

std::string error_json(std::string_view code, std::string_view detail) {
  return Json{{"error", code}, {"detail", detail}}.dump();
}

}  // namespace axai
