#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pf/dataset.hpp"
#include "pf/splitters.hpp"

namespace pf {

// Index of the largest element; the earliest index wins ties. This is the one
// arbiter for every vote in the library.
template <class T>
std::size_t argmax_tie_lowest(std::span<const T> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

struct TreeNode;

// Terminal node. `train_items` records which training rows reached the leaf;
// it exists for inspection and tests only and is not serialized.
struct LeafNode {
  std::uint32_t class_index = 0;
  std::vector<std::uint32_t> train_items;
};

// One outgoing edge of a split: the exemplar the edge belongs to (its values
// stored under the node's transform, ready for distance evaluation) and the
// subtree queries continue into.
struct Branch {
  std::uint32_t class_index = 0;
  std::uint32_t train_index = 0;
  std::vector<double> values;
  std::unique_ptr<TreeNode> child;
};

struct SplitNode {
  MeasureParams measure;
  TransformKind transform = TransformKind::raw;
  std::vector<Branch> branches;  // only exemplars that attracted items
};

struct TreeNode {
  std::variant<LeafNode, SplitNode> content;
};

// Grow one tree: nodes try `candidates` random splitters and keep the one
// with the highest impurity decrease (first drawn wins ties). Nodes that are
// pure, or whose best splitter routes everything into one bucket, become
// leaves (majority class; class order breaks ties).
std::unique_ptr<TreeNode> build_tree(std::vector<std::uint32_t> items, TreeContext& ctx,
                                     std::size_t candidates, DPWorkspace& ws);

const LeafNode& route_to_leaf(const TreeNode& root, const QueryView& query,
                              DPWorkspace* ws = nullptr);
std::uint32_t classify_tree(const TreeNode& root, const QueryView& query, DPWorkspace* ws = nullptr);

nlohmann::json node_to_json(const TreeNode& node);
nlohmann::json measure_to_json(const MeasureParams& params);
MeasureParams measure_from_json(const nlohmann::json& j);

struct ForestConfig {
  std::size_t tree_count = 100;
  std::size_t candidates = 5;
  std::uint64_t seed = 42;
  unsigned threads = 1;  // 0 = all hardware threads; affects speed only
  std::vector<MeasureKind> measures = {MeasureKind::adtw, MeasureKind::cdtw, MeasureKind::lcss};
};

class Forest {
public:
  // Tree k draws its randomness from substream(config.seed, k), so the model
  // depends only on (data, config minus threads).
  static Forest train(const Dataset& data, ForestConfig config);

  const ForestConfig& config() const { return config_; }
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t series_length() const { return length_; }
  std::size_t tree_count() const { return trees_.size(); }
  const TreeNode& tree(std::size_t k) const { return *trees_[k]; }

  std::vector<std::size_t> vote_counts(const TimeSeries& query) const;
  std::uint32_t predict_index(const TimeSeries& query) const;
  std::string predict(const TimeSeries& query) const;
  std::vector<double> predict_proba(const TimeSeries& query) const;
  std::vector<std::string> predict_batch(const Dataset& queries, unsigned threads = 1) const;

  nlohmann::json to_json() const;
  static Forest from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Forest load(const std::filesystem::path& path);

  // Wall-clock build times. Run metadata only; never serialized.
  double train_seconds() const { return train_seconds_; }
  const std::vector<double>& tree_seconds() const { return tree_seconds_; }

private:
  Forest() = default;

  ForestConfig config_;
  std::vector<std::string> classes_;
  std::size_t length_ = 0;
  std::vector<std::unique_ptr<TreeNode>> trees_;
  std::vector<double> tree_seconds_;
  double train_seconds_ = 0.0;
};

}  // namespace pf
