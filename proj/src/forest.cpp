#include "pf/forest.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "pf/errors.hpp"
#include "pf/parallel.hpp"
#include "pf/transforms.hpp"

namespace pf {
namespace {

constexpr const char* kModelFormat = "pforest-model";
constexpr int kModelVersion = 1;

std::vector<std::size_t> class_histogram(const Dataset& data, std::span<const std::uint32_t> items) {
  std::vector<std::size_t> counts(data.class_count(), 0);
  for (const std::uint32_t item : items) ++counts[data.label_index(item)];
  return counts;
}

std::unique_ptr<TreeNode> make_leaf(std::uint32_t class_index, std::vector<std::uint32_t> items) {
  auto node = std::make_unique<TreeNode>();
  node->content = LeafNode{class_index, std::move(items)};
  return node;
}

}  // namespace

std::unique_ptr<TreeNode> build_tree(std::vector<std::uint32_t> items, TreeContext& ctx,
                                     std::size_t candidates, DPWorkspace& ws) {
  if (items.empty()) throw std::invalid_argument("build_tree: node must hold at least one item");
  if (candidates == 0) throw std::invalid_argument("build_tree: need at least one candidate");
  const Dataset& data = ctx.data();

  const auto counts = class_histogram(data, items);
  const std::size_t majority = argmax_tie_lowest<std::size_t>(counts);
  if (counts[majority] == items.size()) {  // pure node
    return make_leaf(static_cast<std::uint32_t>(majority), std::move(items));
  }

  Splitter best_splitter;
  std::vector<std::vector<std::uint32_t>> best_buckets;
  double best_gain = 0.0;
  for (std::size_t r = 0; r < candidates; ++r) {
    Splitter candidate = gen_candidate_splitter(items, ctx);
    auto buckets = partition_by_splitter(candidate, items, data, &ws);
    const double gain = split_gain(data, items, buckets);
    if (r == 0 || gain > best_gain) {
      best_gain = gain;
      best_splitter = std::move(candidate);
      best_buckets = std::move(buckets);
    }
  }

  const std::size_t populated =
      static_cast<std::size_t>(std::count_if(best_buckets.begin(), best_buckets.end(),
                                             [](const auto& b) { return !b.empty(); }));
  if (populated < 2) {  // the best split separates nothing; stop here
    return make_leaf(static_cast<std::uint32_t>(majority), std::move(items));
  }

  SplitNode split;
  split.measure = best_splitter.measure;
  split.transform = best_splitter.transform;
  for (std::size_t e = 0; e < best_splitter.exemplars.size(); ++e) {
    if (best_buckets[e].empty()) continue;
    const ExemplarRef& ex = best_splitter.exemplars[e];
    Branch branch;
    branch.class_index = ex.class_index;
    branch.train_index = ex.train_index;
    const auto values = data.values(ex.train_index, best_splitter.transform);
    branch.values.assign(values.begin(), values.end());
    branch.child = build_tree(std::move(best_buckets[e]), ctx, candidates, ws);
    split.branches.push_back(std::move(branch));
  }
  auto node = std::make_unique<TreeNode>();
  node->content = std::move(split);
  return node;
}

const LeafNode& route_to_leaf(const TreeNode& root, const QueryView& query, DPWorkspace* ws) {
  const TreeNode* node = &root;
  while (const auto* split = std::get_if<SplitNode>(&node->content)) {
    const auto values = query.view(split->transform);
    std::size_t best_branch = 0;
    double best = kInfinity;
    for (std::size_t e = 0; e < split->branches.size(); ++e) {
      const auto outcome = measure_distance(split->measure, values, split->branches[e].values, best, ws);
      if (!outcome.early_abandoned() && outcome.value() < best) {
        best = outcome.value();
        best_branch = e;
      }
    }
    node = split->branches[best_branch].child.get();
  }
  return std::get<LeafNode>(node->content);
}

std::uint32_t classify_tree(const TreeNode& root, const QueryView& query, DPWorkspace* ws) {
  return route_to_leaf(root, query, ws).class_index;
}

nlohmann::json measure_to_json(const MeasureParams& params) {
  nlohmann::json j;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AdtwParams>) {
          j["kind"] = "adtw";
          j["omega"] = p.omega;
          j["gamma"] = std::string(to_string(p.gamma));
        } else if constexpr (std::is_same_v<P, CdtwParams>) {
          j["kind"] = "cdtw";
          j["window"] = p.window;
          j["gamma"] = std::string(to_string(p.gamma));
        } else {
          j["kind"] = "lcss";
          j["epsilon"] = p.epsilon;
          j["window"] = p.window;
        }
      },
      params);
  return j;
}

MeasureParams measure_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "adtw") {
    return AdtwParams{j.at("omega").get<double>(),
                      cost_exponent_from_string(j.at("gamma").get<std::string>())};
  }
  if (kind == "cdtw") {
    return CdtwParams{j.at("window").get<std::size_t>(),
                      cost_exponent_from_string(j.at("gamma").get<std::string>())};
  }
  if (kind == "lcss") {
    return LcssParams{j.at("epsilon").get<double>(), j.at("window").get<std::size_t>()};
  }
  throw FormatError("model: unknown measure kind '" + kind + "'");
}

nlohmann::json node_to_json(const TreeNode& node) {
  if (const auto* leaf = std::get_if<LeafNode>(&node.content)) {
    return nlohmann::json{{"leaf", leaf->class_index}};
  }
  const auto& split = std::get<SplitNode>(node.content);
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : split.branches) {
    branches.push_back(nlohmann::json{{"class", b.class_index},
                                      {"train_index", b.train_index},
                                      {"values", b.values},
                                      {"child", node_to_json(*b.child)}});
  }
  return nlohmann::json{{"split",
                         nlohmann::json{{"measure", measure_to_json(split.measure)},
                                        {"transform", std::string(to_string(split.transform))},
                                        {"branches", std::move(branches)}}}};
}

namespace {

std::unique_ptr<TreeNode> node_from_json(const nlohmann::json& j, std::size_t length,
                                         std::size_t class_count) {
  auto node = std::make_unique<TreeNode>();
  if (j.contains("leaf")) {
    const auto class_index = j.at("leaf").get<std::uint32_t>();
    if (class_index >= class_count) throw FormatError("model: leaf class out of range");
    node->content = LeafNode{class_index, {}};
    return node;
  }
  if (!j.contains("split")) throw FormatError("model: node is neither leaf nor split");
  const auto& sj = j.at("split");
  SplitNode split;
  split.measure = measure_from_json(sj.at("measure"));
  split.transform = transform_from_string(sj.at("transform").get<std::string>());
  const auto& branches = sj.at("branches");
  if (!branches.is_array() || branches.size() < 2) {
    throw FormatError("model: split needs at least two branches");
  }
  for (const auto& bj : branches) {
    Branch branch;
    branch.class_index = bj.at("class").get<std::uint32_t>();
    if (branch.class_index >= class_count) throw FormatError("model: branch class out of range");
    branch.train_index = bj.at("train_index").get<std::uint32_t>();
    branch.values = bj.at("values").get<std::vector<double>>();
    if (branch.values.size() != length) {
      throw FormatError("model: exemplar length does not match the model length");
    }
    branch.child = node_from_json(bj.at("child"), length, class_count);
    split.branches.push_back(std::move(branch));
  }
  node->content = std::move(split);
  return node;
}

}  // namespace

Forest Forest::train(const Dataset& data, ForestConfig config) {
  if (config.tree_count == 0) throw std::invalid_argument("forest needs at least one tree");
  if (config.candidates == 0) throw std::invalid_argument("forest needs at least one candidate per node");
  if (config.measures.empty()) throw std::invalid_argument("forest needs a non-empty measure pool");

  Forest forest;
  forest.config_ = config;
  forest.classes_ = data.classes();
  forest.length_ = data.length();
  forest.trees_.resize(config.tree_count);
  forest.tree_seconds_.assign(config.tree_count, 0.0);

  // Transform caches are built once up front instead of racing lazily.
  (void)data.values(0, TransformKind::first_derivative);

  std::vector<std::uint32_t> all_items(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) all_items[i] = static_cast<std::uint32_t>(i);

  const auto start = std::chrono::steady_clock::now();
  parallel_for(config.tree_count, config.threads, [&](std::size_t k) {
    const auto tree_start = std::chrono::steady_clock::now();
    TreeContext ctx(data, config.measures, Rng::substream(config.seed, k));
    DPWorkspace ws;
    forest.trees_[k] = build_tree(all_items, ctx, config.candidates, ws);
    forest.tree_seconds_[k] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tree_start).count();
  });
  forest.train_seconds_ =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return forest;
}

std::vector<std::size_t> Forest::vote_counts(const TimeSeries& query) const {
  if (query.length() != length_) {
    throw FormatError("query length " + std::to_string(query.length()) +
                      " does not match the model length " + std::to_string(length_));
  }
  QueryView view(query.values());
  DPWorkspace ws;
  std::vector<std::size_t> votes(classes_.size(), 0);
  for (const auto& tree : trees_) ++votes[classify_tree(*tree, view, &ws)];
  return votes;
}

std::uint32_t Forest::predict_index(const TimeSeries& query) const {
  const auto votes = vote_counts(query);
  return static_cast<std::uint32_t>(argmax_tie_lowest<std::size_t>(votes));
}

std::string Forest::predict(const TimeSeries& query) const { return classes_[predict_index(query)]; }

std::vector<double> Forest::predict_proba(const TimeSeries& query) const {
  const auto votes = vote_counts(query);
  std::vector<double> proba(votes.size());
  for (std::size_t c = 0; c < votes.size(); ++c) {
    proba[c] = static_cast<double>(votes[c]) / static_cast<double>(trees_.size());
  }
  return proba;
}

std::vector<std::string> Forest::predict_batch(const Dataset& queries, unsigned threads) const {
  std::vector<std::string> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    out[i] = predict(queries.series(i));
  });
  return out;
}

nlohmann::json Forest::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) trees.push_back(node_to_json(*tree));
  nlohmann::json measures = nlohmann::json::array();
  for (const auto kind : config_.measures) measures.push_back(std::string(to_string(kind)));
  return nlohmann::json{{"format", kModelFormat},
                        {"version", kModelVersion},
                        {"length", length_},
                        {"classes", classes_},
                        {"config", nlohmann::json{{"trees", config_.tree_count},
                                                  {"candidates", config_.candidates},
                                                  {"seed", config_.seed},
                                                  {"measures", std::move(measures)}}},
                        {"trees", std::move(trees)}};
}

Forest Forest::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != kModelFormat) {
      throw FormatError("model: missing or unknown format marker");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw FormatError("model: unsupported version");
    }
    Forest forest;
    forest.length_ = j.at("length").get<std::size_t>();
    forest.classes_ = j.at("classes").get<std::vector<std::string>>();
    if (forest.length_ < 2) throw FormatError("model: length must be at least 2");
    if (forest.classes_.empty()) throw FormatError("model: class list is empty");
    const auto& cj = j.at("config");
    forest.config_.tree_count = cj.at("trees").get<std::size_t>();
    forest.config_.candidates = cj.at("candidates").get<std::size_t>();
    forest.config_.seed = cj.at("seed").get<std::uint64_t>();
    forest.config_.measures.clear();
    for (const auto& m : cj.at("measures")) {
      forest.config_.measures.push_back(measure_kind_from_string(m.get<std::string>()));
    }
    const auto& trees = j.at("trees");
    if (!trees.is_array() || trees.empty()) throw FormatError("model: no trees");
    for (const auto& tj : trees) {
      forest.trees_.push_back(node_from_json(tj, forest.length_, forest.classes_.size()));
    }
    forest.tree_seconds_.assign(forest.trees_.size(), 0.0);
    return forest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model: malformed document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

void Forest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path.string());
  out << to_json().dump() << '\n';
  out.flush();
  if (!out) throw IoError("write failure: " + path.string());
}

Forest Forest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model: invalid JSON in " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace pf
