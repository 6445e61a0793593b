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

#ifndef AXAI_SERVICE_HPP_
#define AXAI_SERVICE_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "axai/dataset.hpp"
#include "axai/digest.hpp"
#include "axai/error.hpp"
#include "axai/explanation.hpp"
#include "axai/forest.hpp"
#include "axai/lime.hpp"
#include "axai/render.hpp"
#include "axai/shapley.hpp"

namespace axai {

struct PredictionRow {
  std::size_t row_id = 0;
  double pred_flow = 0.0;
  std::string city;
  std::string detector;
  double speed = 0.0;
  double occupancy = 0.0;
};

struct ScenarioMeta {
  std::string impact;
  std::string function;
  std::string transparency;
  std::string reasoning;
  std::string persona_name;
  std::string description;
};

const ScenarioMeta& default_scenario();

// SHA-256 of the method name followed by the three feature values as
// little-endian IEEE-754 doubles. -0.0 is encoded as +0.0.
class CacheKey {
 public:
  static CacheKey of(ExplanationMethod method, const FeatureVector& features);

  const Sha256Digest& digest() const { return digest_; }
  std::string hex() const { return to_hex(digest_); }

  friend bool operator==(const CacheKey&, const CacheKey&) = default;

  struct Hash {
    std::size_t operator()(const CacheKey& key) const;
  };

 private:
  Sha256Digest digest_{};
};

// Concurrent get-or-compute store of serialized explanations. The first
// value stored under a key is kept forever; computations run outside the
// lock so distinct keys never wait on each other.
class ExplanationCache {
 public:
  using Payload = std::shared_ptr<const std::string>;

  struct Lookup {
    Payload payload;
    bool hit = false;
  };

  Lookup get_or_compute(const CacheKey& key,
                        const std::function<std::string()>& compute);
  std::optional<Payload> find(const CacheKey& key) const;

  std::uint64_t hits() const { return hits_.load(); }
  std::uint64_t misses() const { return misses_.load(); }
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<CacheKey, Payload, CacheKey::Hash> entries_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

enum class ServiceErrorCode { kRowNotFound, kUnknownMethod, kServiceNotReady };

std::string_view to_string(ServiceErrorCode code);
int http_status(ServiceErrorCode code);

class ServiceError : public CodedError<ServiceErrorCode> {
 public:
  ServiceError(ServiceErrorCode code, const std::string& detail)
      : CodedError(code, detail) {}
};

struct ExplainOptions {
  LimeConfig lime;
  ShapConfig shap;
};

// One explanation, computed and rendered, without caching.
AccessibleExplanation explain_instance(const Forest& model, const FeatureVector& x,
                                       ExplanationMethod method,
                                       const ExplainOptions& options = {});

std::vector<PredictionRow> prediction_table(const Forest& model, const Dataset& data);

struct HealthStatus {
  bool ready = false;
  bool model_loaded = false;
  std::size_t rows = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
};

// Prediction table, cached explanations and scenario metadata over one
// model and one inference dataset. Model and data are immutable snapshots;
// only the cache, its counters and (through refresh) the snapshot pointer
// change.
class ExplainService {
 public:
  explicit ExplainService(ExplainOptions options = {});
  ExplainService(std::shared_ptr<const Forest> model,
                 std::shared_ptr<const Dataset> data, ExplainOptions options = {});

  // Loads both files; a failure leaves the service not ready and is
  // reported by last_error().
  void load_files(const std::string& model_path, const std::string& data_path);
  // Re-reads the data file given to load_files.
  void refresh();

  std::vector<PredictionRow> get_predictions() const;
  // Serialized AccessibleExplanation JSON.
  ExplanationCache::Lookup get_explanation(std::size_t row_id, std::string_view method);
  const ScenarioMeta& get_scenario() const { return default_scenario(); }
  HealthStatus health() const;

  std::string last_error() const;
  const ExplanationCache& cache() const { return cache_; }

 private:
  struct Snapshot {
    std::shared_ptr<const Forest> model;
    std::shared_ptr<const Dataset> data;
    std::vector<PredictionRow> rows;
    FeatureMatrix features;
  };

  std::shared_ptr<const Snapshot> snapshot() const;
  void install(std::shared_ptr<const Forest> model, std::shared_ptr<const Dataset> data);

  ExplainOptions options_;
  ExplanationCache cache_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::string model_path_;
  std::string data_path_;
  std::string last_error_;
};

std::string to_json(const std::vector<PredictionRow>& rows);
std::string to_json(const ScenarioMeta& scenario);
std::string to_json(const HealthStatus& health);
std::string error_json(std::string_view code, std::string_view detail);

}  // namespace axai

#endif  // AXAI_SERVICE_HPP_
