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

#include "axai/forest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "axai/digest.hpp"
#include "axai/random.hpp"

namespace axai {

std::string_view to_string(ModelErrorCode code) {
  switch (code) {
    case ModelErrorCode::kInvalidConfig: return "InvalidConfig";
    case ModelErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ModelErrorCode::kDegenerateData: return "DegenerateData";
    case ModelErrorCode::kFormatVersionUnsupported: return "FormatVersionUnsupported";
    case ModelErrorCode::kCorruptArtifact: return "CorruptArtifact";
  }
  return "Unknown";
}

ModelError::ModelError(ModelErrorCode code, const std::string& detail)
    : CodedError(code, std::string(to_string(code)) + ": " + detail) {}

// ---------------------------------------------------------------------------
// Tree

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw ModelError(ModelErrorCode::kCorruptArtifact, "tree has no nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (const auto* split = std::get_if<SplitNode>(&nodes_[i])) {
      if (split->feature >= kNumFeatures || !std::isfinite(split->threshold) ||
          split->left <= i || split->right <= i ||
          split->left >= nodes_.size() || split->right >= nodes_.size()) {
        throw ModelError(ModelErrorCode::kCorruptArtifact,
                         "malformed split node " + std::to_string(i));
      }
    } else if (!std::isfinite(std::get<LeafNode>(nodes_[i]).value)) {
      throw ModelError(ModelErrorCode::kCorruptArtifact,
                       "non-finite leaf " + std::to_string(i));
    }
  }
}

double Tree::predict(const FeatureVector& x) const {
  std::size_t i = 0;
  while (const auto* split = std::get_if<SplitNode>(&nodes_[i])) {
    i = x[split->feature] < split->threshold ? split->left : split->right;
  }
  return std::get<LeafNode>(nodes_[i]).value;
}

bool Tree::uses_feature(std::size_t feature) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [feature](const TreeNode& n) {
    const auto* split = std::get_if<SplitNode>(&n);
    return split != nullptr && split->feature == feature;
  });
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (const auto* split = std::get_if<SplitNode>(&nodes_[i])) {
      level[split->left] = level[split->right] = level[i] + 1;
    }
  }
  return deepest;
}

// ---------------------------------------------------------------------------
// Forest

Forest::Forest(ForestConfig config, std::vector<Tree> trees,
               StatsTable training_stats)
    : config_(std::move(config)),
      trees_(std::move(trees)),
      training_stats_(training_stats) {
  if (config_.n_trees == 0 || config_.min_samples_leaf == 0 ||
      (config_.max_depth && *config_.max_depth == 0)) {
    throw ModelError(ModelErrorCode::kInvalidConfig,
                     "n_trees, min_samples_leaf and max_depth must be positive");
  }
  if (trees_.size() != config_.n_trees) {
    throw ModelError(ModelErrorCode::kInvalidConfig,
                     "expected " + std::to_string(config_.n_trees) +
                         " trees, got " + std::to_string(trees_.size()));
  }
}

double Forest::predict(const FeatureVector& x) const {
  double sum = 0.0;
  for (const Tree& tree : trees_) sum += tree.predict(x);
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> Forest::predict_batch(const FeatureMatrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const FeatureVector& row : x) out.push_back(predict(row));
  return out;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct PendingNode {
  std::size_t node;
  std::size_t begin;
  std::size_t end;
  std::size_t depth;
};

struct BestSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;
  bool found = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const double> y,
              const ForestConfig& config)
      : x_(x), y_(y), config_(config) {}

  Tree build(std::vector<std::size_t> samples) {
    samples_ = std::move(samples);
    nodes_.clear();
    nodes_.emplace_back(LeafNode{});
    std::vector<PendingNode> stack{{0, 0, samples_.size(), 0}};
    while (!stack.empty()) {
      const PendingNode pending = stack.back();
      stack.pop_back();
      const BestSplit best = find_split(pending);
      if (!best.found) {
        nodes_[pending.node] = LeafNode{leaf_value(pending.begin, pending.end)};
        continue;
      }
      const auto first = samples_.begin() + static_cast<std::ptrdiff_t>(pending.begin);
      const auto last = samples_.begin() + static_cast<std::ptrdiff_t>(pending.end);
      const auto middle = std::stable_partition(first, last, [&](std::size_t s) {
        return x_[s][best.feature] < best.threshold;
      });
      const auto mid = static_cast<std::size_t>(middle - samples_.begin());
      const std::size_t left = nodes_.size();
      const std::size_t right = left + 1;
      nodes_.emplace_back(LeafNode{});
      nodes_.emplace_back(LeafNode{});
      nodes_[pending.node] = SplitNode{best.feature, best.threshold, left, right};
      stack.push_back({right, mid, pending.end, pending.depth + 1});
      stack.push_back({left, pending.begin, mid, pending.depth + 1});
    }
    return Tree(std::move(nodes_));
  }

 private:
  double leaf_value(std::size_t begin, std::size_t end) const {
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) sum += y_[samples_[k]];
    return sum / static_cast<double>(end - begin);
  }

  BestSplit find_split(const PendingNode& p) {
    BestSplit best;
    const std::size_t n = p.end - p.begin;
    const std::size_t min_leaf = config_.min_samples_leaf;
    if (config_.max_depth && p.depth >= *config_.max_depth) return best;
    if (n < 2 * min_leaf) return best;

    double total = 0.0;
    double y_min = y_[samples_[p.begin]];
    double y_max = y_min;
    for (std::size_t k = p.begin; k < p.end; ++k) {
      const double v = y_[samples_[k]];
      total += v;
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
    if (y_min == y_max) return best;

    // Maximizing S_l^2/n_l + S_r^2/n_r is equivalent to minimizing the
    // summed squared error of the two children.
    const double parent_score = total * total / static_cast<double>(n);
    best.score = parent_score;
    scratch_.assign(samples_.begin() + static_cast<std::ptrdiff_t>(p.begin),
                    samples_.begin() + static_cast<std::ptrdiff_t>(p.end));
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      std::sort(scratch_.begin(), scratch_.end(), [&](std::size_t a, std::size_t b) {
        const double xa = x_[a][f];
        const double xb = x_[b][f];
        return xa < xb || (xa == xb && a < b);
      });
      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_sum += y_[scratch_[k]];
        const double lo = x_[scratch_[k]][f];
        const double hi = x_[scratch_[k + 1]][f];
        const std::size_t n_left = k + 1;
        const std::size_t n_right = n - n_left;
        if (!(lo < hi) || n_left < min_leaf || n_right < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double score = left_sum * left_sum / static_cast<double>(n_left) +
                             right_sum * right_sum / static_cast<double>(n_right);
        if (score > best.score) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(lo < threshold)) threshold = hi;
          best = {f, threshold, score, true};
        }
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  std::span<const double> y_;
  const ForestConfig& config_;
  std::vector<std::size_t> samples_;
  std::vector<std::size_t> scratch_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

Forest train(const FeatureMatrix& x, std::span<const double> y,
             const ForestConfig& config) {
  if (x.size() != y.size()) {
    throw ModelError(ModelErrorCode::kShapeMismatch,
                     std::to_string(x.size()) + " feature rows vs " +
                         std::to_string(y.size()) + " targets");
  }
  if (x.size() < 2) {
    throw ModelError(ModelErrorCode::kDegenerateData,
                     "training needs at least 2 rows");
  }
  if (config.n_trees == 0 || config.min_samples_leaf == 0 ||
      (config.max_depth && *config.max_depth == 0)) {
    throw ModelError(ModelErrorCode::kInvalidConfig,
                     "n_trees, min_samples_leaf and max_depth must be positive");
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw ModelError(ModelErrorCode::kDegenerateData, "non-finite target");
    }
  }

  const std::size_t n = x.size();
  TreeBuilder builder(x, y, config);
  std::vector<Tree> trees;
  trees.reserve(config.n_trees);
  std::vector<std::size_t> samples(n);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Rng rng(mix_seed(config.bootstrap_seed, t));
    for (std::size_t& s : samples) s = rng.uniform_index(n);
    trees.push_back(builder.build(samples));
  }
  return Forest(config, std::move(trees), feature_stats(x));
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr std::string_view kMagic = "axai-forest";
constexpr std::string_view kChecksumTag = "checksum ";

std::string real(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

[[noreturn]] void corrupt(const std::string& detail) {
  throw ModelError(ModelErrorCode::kCorruptArtifact, detail);
}

// Whitespace-separated token cursor over the artifact body.
class Tokens {
 public:
  explicit Tokens(std::string_view body) : body_(body) {}

  std::string_view word() {
    while (pos_ < body_.size() && std::isspace(static_cast<unsigned char>(body_[pos_])))
      ++pos_;
    const std::size_t start = pos_;
    while (pos_ < body_.size() && !std::isspace(static_cast<unsigned char>(body_[pos_])))
      ++pos_;
    if (start == pos_) corrupt("unexpected end of artifact");
    return body_.substr(start, pos_ - start);
  }

  void expect(std::string_view keyword) {
    const std::string_view got = word();
    if (got != keyword) {
      corrupt("expected '" + std::string(keyword) + "', found '" +
              std::string(got) + "'");
    }
  }

  double real() {
    const std::string_view w = word();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size() || !std::isfinite(v)) {
      corrupt("bad real '" + std::string(w) + "'");
    }
    return v;
  }

  std::uint64_t integer() {
    const std::string_view w = word();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      corrupt("bad integer '" + std::string(w) + "'");
    }
    return v;
  }

  bool at_end() {
    while (pos_ < body_.size() && std::isspace(static_cast<unsigned char>(body_[pos_])))
      ++pos_;
    return pos_ == body_.size();
  }

 private:
  std::string_view body_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const Forest& forest) {
  const ForestConfig& cfg = forest.config();
  std::ostringstream out;
  out << kMagic << '\n';
  out << "format_version " << kArtifactFormatVersion << '\n';
  out << "feature_names";
  for (std::string_view name : forest.feature_names()) out << ' ' << name;
  out << '\n';
  out << "n_trees " << cfg.n_trees << '\n';
  out << "max_depth "
      << (cfg.max_depth ? std::to_string(*cfg.max_depth) : std::string("unlimited"))
      << '\n';
  out << "min_samples_leaf " << cfg.min_samples_leaf << '\n';
  out << "bootstrap_seed " << cfg.bootstrap_seed << '\n';
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    const FeatureStats& s = forest.training_stats()[j];
    out << "stats " << kFeatureNames[j] << ' ' << real(s.mean) << ' '
        << real(s.stddev) << ' ' << real(s.min) << ' ' << real(s.max) << '\n';
  }
  out << "reference_rows " << forest.reference_sample().size() << '\n';
  for (const FeatureVector& row : forest.reference_sample()) {
    out << "row " << real(row[0]) << ' ' << real(row[1]) << ' ' << real(row[2])
        << '\n';
  }
  for (std::size_t t = 0; t < forest.trees().size(); ++t) {
    const auto& nodes = forest.trees()[t].nodes();
    out << "tree " << t << ' ' << nodes.size() << '\n';
    for (const TreeNode& node : nodes) {
      if (const auto* split = std::get_if<SplitNode>(&node)) {
        out << "split " << split->feature << ' ' << real(split->threshold) << ' '
            << split->left << ' ' << split->right << '\n';
      } else {
        out << "leaf " << real(std::get<LeafNode>(node).value) << '\n';
      }
    }
  }
  std::string body = std::move(out).str();
  body += kChecksumTag;
  body += sha256_hex(std::string_view(body).substr(0, body.size() - kChecksumTag.size()));
  body += '\n';
  return body;
}

Forest deserialize(std::string_view artifact) {
  if (!artifact.starts_with(std::string(kMagic) + "\n")) {
    corrupt("missing '" + std::string(kMagic) + "' header");
  }
  {
    Tokens head(artifact.substr(kMagic.size()));
    head.expect("format_version");
    const std::uint64_t version = head.integer();
    if (version != kArtifactFormatVersion) {
      throw ModelError(ModelErrorCode::kFormatVersionUnsupported,
                       "artifact format_version " + std::to_string(version) +
                           ", supported: " + std::to_string(kArtifactFormatVersion));
    }
  }

  const std::size_t tag = artifact.rfind("\n" + std::string(kChecksumTag));
  if (tag == std::string_view::npos) corrupt("checksum line missing (truncated?)");
  const std::string_view body = artifact.substr(0, tag + 1);
  std::string_view stated = artifact.substr(tag + 1 + kChecksumTag.size());
  if (stated.ends_with('\n')) stated.remove_suffix(1);
  if (stated != sha256_hex(body)) corrupt("checksum mismatch");

  Tokens in(body.substr(kMagic.size()));
  in.expect("format_version");
  in.integer();
  in.expect("feature_names");
  for (std::string_view name : kFeatureNames) in.expect(name);

  ForestConfig cfg;
  in.expect("n_trees");
  cfg.n_trees = in.integer();
  in.expect("max_depth");
  {
    const std::string_view depth = in.word();
    if (depth != "unlimited") {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(depth.data(), depth.data() + depth.size(), v);
      if (ec != std::errc() || ptr != depth.data() + depth.size()) corrupt("bad max_depth");
      cfg.max_depth = v;
    }
  }
  in.expect("min_samples_leaf");
  cfg.min_samples_leaf = in.integer();
  in.expect("bootstrap_seed");
  cfg.bootstrap_seed = in.integer();

  StatsTable stats;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    in.expect("stats");
    in.expect(kFeatureNames[j]);
    stats[j].mean = in.real();
    stats[j].stddev = in.real();
    stats[j].min = in.real();
    stats[j].max = in.real();
  }

  in.expect("reference_rows");
  const std::uint64_t n_ref = in.integer();
  FeatureMatrix reference;
  for (std::uint64_t r = 0; r < n_ref; ++r) {
    in.expect("row");
    FeatureVector row;
    for (std::size_t j = 0; j < kNumFeatures; ++j) row[j] = in.real();
    reference.push_back(row);
  }

  if (cfg.n_trees == 0 || cfg.n_trees > 1'000'000) corrupt("implausible n_trees");
  std::vector<Tree> trees;
  trees.reserve(cfg.n_trees);
  for (std::size_t t = 0; t < cfg.n_trees; ++t) {
    in.expect("tree");
    if (in.integer() != t) corrupt("tree index out of order");
    const std::uint64_t n_nodes = in.integer();
    if (n_nodes == 0 || n_nodes > body.size()) corrupt("implausible node count");
    std::vector<TreeNode> nodes;
    nodes.reserve(n_nodes);
    for (std::uint64_t k = 0; k < n_nodes; ++k) {
      const std::string_view kind = in.word();
      if (kind == "split") {
        SplitNode split;
        split.feature = in.integer();
        split.threshold = in.real();
        split.left = in.integer();
        split.right = in.integer();
        nodes.emplace_back(split);
      } else if (kind == "leaf") {
        nodes.emplace_back(LeafNode{in.real()});
      } else {
        corrupt("unknown node kind '" + std::string(kind) + "'");
      }
    }
    trees.emplace_back(std::move(nodes));
  }
  if (!in.at_end()) corrupt("trailing content after last tree");

  Forest forest(cfg, std::move(trees), stats);
  forest.set_reference_sample(std::move(reference));
  return forest;
}

void save(const Forest& forest, std::ostream& sink) {
  sink << serialize(forest);
  if (!sink) throw std::runtime_error("failed to write model artifact");
}

Forest load(std::istream& source) {
  const std::string artifact{std::istreambuf_iterator<char>(source),
                             std::istreambuf_iterator<char>()};
  return deserialize(artifact);
}

void save_file(const Forest& forest, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save(forest, out);
}

Forest load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return load(in);
}

}  // namespace axai
