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

#ifndef AXAI_FOREST_HPP_
#define AXAI_FOREST_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "axai/dataset.hpp"
#include "axai/error.hpp"

namespace axai {

// Anything that maps a feature vector to a flow. Implementations must be
// pure: the same input always yields the same output.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual double predict(const FeatureVector& x) const = 0;
};

// Adapts a callable; used for analytic models in tests and tools.
class FunctionPredictor final : public Predictor {
 public:
  explicit FunctionPredictor(std::function<double(const FeatureVector&)> fn)
      : fn_(std::move(fn)) {}
  double predict(const FeatureVector& x) const override { return fn_(x); }

 private:
  std::function<double(const FeatureVector&)> fn_;
};

struct SplitNode {
  std::size_t feature = 0;
  double threshold = 0.0;  // x[feature] < threshold goes left
  std::size_t left = 0;
  std::size_t right = 0;

  friend bool operator==(const SplitNode&, const SplitNode&) = default;
};

struct LeafNode {
  double value = 0.0;

  friend bool operator==(const LeafNode&, const LeafNode&) = default;
};

using TreeNode = std::variant<SplitNode, LeafNode>;

// Flat, root-first regression tree. Children always sit at larger indices
// than their parent, so every path ends at a leaf.
class Tree {
 public:
  explicit Tree(std::vector<TreeNode> nodes);

  double predict(const FeatureVector& x) const;
  bool uses_feature(std::size_t feature) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // nullopt: grow until pure
  std::size_t min_samples_leaf = 1;
  std::uint64_t bootstrap_seed = 42;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

enum class ModelErrorCode {
  kInvalidConfig,
  kShapeMismatch,
  kDegenerateData,
  kFormatVersionUnsupported,
  kCorruptArtifact,
};

std::string_view to_string(ModelErrorCode code);

class ModelError : public CodedError<ModelErrorCode> {
 public:
  ModelError(ModelErrorCode code, const std::string& detail);
};

class Forest final : public Predictor {
 public:
  Forest(ForestConfig config, std::vector<Tree> trees, StatsTable training_stats);

  // Sum of tree outputs in tree order, divided by the tree count.
  double predict(const FeatureVector& x) const override;
  std::vector<double> predict_batch(const FeatureMatrix& x) const;

  const ForestConfig& config() const { return config_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const StatsTable& training_stats() const { return training_stats_; }
  std::span<const std::string_view> feature_names() const { return kFeatureNames; }

  // Seeded subsample of the training rows kept with the model so that
  // interventional explanations can run without the training file.
  const FeatureMatrix& reference_sample() const { return reference_sample_; }
  void set_reference_sample(FeatureMatrix sample) {
    reference_sample_ = std::move(sample);
  }

 private:
  ForestConfig config_;
  std::vector<Tree> trees_;
  StatsTable training_stats_;
  FeatureMatrix reference_sample_;
};

// CART regression trees on bootstrap resamples. Every split considers all
// three features; thresholds are midpoints of consecutive distinct values;
// equal gains resolve to the lowest feature index, then lowest threshold.
// Tree t bootstraps from Rng(mix_seed(bootstrap_seed, t)).
Forest train(const FeatureMatrix& x, std::span<const double> y,
             const ForestConfig& config = {});

inline constexpr int kArtifactFormatVersion = 1;
inline constexpr const char* kDefaultModelPath = "pretrained_model";

// Versioned text artifact terminated by a SHA-256 checksum line. Reals are
// written in shortest round-trip form, so loading reproduces predictions
// bit for bit.
std::string serialize(const Forest& forest);
Forest deserialize(std::string_view artifact);
void save(const Forest& forest, std::ostream& sink);
Forest load(std::istream& source);
void save_file(const Forest& forest, const std::string& path);
Forest load_file(const std::string& path);

}  // namespace axai

#endif  // AXAI_FOREST_HPP_
