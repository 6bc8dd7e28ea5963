#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "pf/dataset.hpp"
#include "pf/errors.hpp"
#include "pf/forest.hpp"
#include "pf/rng.hpp"
#include "pf/synthetic.hpp"
#include "pf/time_series.hpp"

#include "oracles.hpp"

using namespace pf;

namespace {

// Classes separated in both level and slope, so a candidate splitter divides
// them cleanly whichever transform it draws.
Dataset separated_pair(std::size_t per_class, std::size_t length, Rng& rng) {
  std::vector<TimeSeries> rows;
  for (std::size_t i = 0; i < per_class; ++i) {
    std::vector<double> lo(length), hi(length);
    for (std::size_t t = 0; t < length; ++t) {
      lo[t] = rng.real(-0.4, 0.4);
      hi[t] = 10.0 + 4.0 * static_cast<double>(t % 2) + rng.real(-0.4, 0.4);
    }
    rows.emplace_back(lo, "lo");
    rows.emplace_back(hi, "hi");
  }
  return Dataset(std::move(rows));
}

std::vector<std::uint32_t> all_items(const Dataset& data) {
  std::vector<std::uint32_t> items(data.size());
  std::iota(items.begin(), items.end(), 0u);
  return items;
}

}  // namespace

TEST_CASE("argmax prefers the earliest index on ties") {
  const std::vector<int> a = {0, 3, 3};
  CHECK(argmax_tie_lowest<int>(a) == 1);
  const std::vector<int> b = {7};
  CHECK(argmax_tie_lowest<int>(b) == 0);
  const std::vector<int> c = {2, 2, 2};
  CHECK(argmax_tie_lowest<int>(c) == 0);
  const std::vector<double> d = {-1.0, -0.5, -0.5, -2.0};
  CHECK(argmax_tie_lowest<double>(d) == 1);
}

TEST_CASE("a pure node becomes a leaf holding its items") {
  const Dataset data({TimeSeries({0.0, 1.0}, "only"), TimeSeries({1.0, 2.0}, "only"),
                      TimeSeries({2.0, 3.0}, "only")});
  TreeContext ctx(data, {MeasureKind::cdtw}, Rng(5));
  DPWorkspace ws;
  const auto root = build_tree(all_items(data), ctx, 5, ws);
  const auto* leaf = std::get_if<LeafNode>(&root->content);
  REQUIRE(leaf != nullptr);
  CHECK(leaf->class_index == 0);
  CHECK(leaf->train_items == all_items(data));
}

TEST_CASE("indistinguishable classes collapse to a majority leaf") {
  // All rows identical: every candidate routes everything to its first
  // exemplar, so no splitter produces two populated buckets.
  const std::vector<double> v = {1.0, 2.0, 1.0};
  const Dataset data({TimeSeries(v, "a"), TimeSeries(v, "a"), TimeSeries(v, "b")});
  TreeContext ctx(data, {MeasureKind::adtw, MeasureKind::cdtw, MeasureKind::lcss}, Rng(9));
  DPWorkspace ws;
  const auto root = build_tree(all_items(data), ctx, 5, ws);
  const auto* leaf = std::get_if<LeafNode>(&root->content);
  REQUIRE(leaf != nullptr);
  CHECK(leaf->class_index == 0);  // majority: 2 of "a" vs 1 of "b"

  // With the counts tied, the lowest class index wins.
  const Dataset tied({TimeSeries(v, "x"), TimeSeries(v, "y")});
  TreeContext tied_ctx(tied, {MeasureKind::cdtw}, Rng(9));
  const auto tied_root = build_tree(all_items(tied), tied_ctx, 3, ws);
  const auto* tied_leaf = std::get_if<LeafNode>(&tied_root->content);
  REQUIRE(tied_leaf != nullptr);
  CHECK(tied_leaf->class_index == 0);
}

TEST_CASE("well-separated classes solve in a single split") {
  Rng gen(17);
  const Dataset data = separated_pair(8, 12, gen);
  TreeContext ctx(data, {MeasureKind::adtw, MeasureKind::cdtw, MeasureKind::lcss}, Rng(23));
  DPWorkspace ws;
  const auto root = build_tree(all_items(data), ctx, 5, ws);
  const auto* split = std::get_if<SplitNode>(&root->content);
  REQUIRE(split != nullptr);
  REQUIRE(split->branches.size() == 2);
  for (const auto& branch : split->branches) {
    const auto* leaf = std::get_if<LeafNode>(&branch.child->content);
    REQUIRE(leaf != nullptr);
    CHECK(leaf->class_index == branch.class_index);
  }
  // Branch exemplar values are stored under the node's transform.
  for (const auto& branch : split->branches) {
    const auto expected = data.values(branch.train_index, split->transform);
    REQUIRE(branch.values.size() == expected.size());
    for (std::size_t t = 0; t < expected.size(); ++t) CHECK(branch.values[t] == expected[t]);
  }
}

TEST_CASE("every training row lands in the leaf that recorded it") {
  const auto [train, test] = make_shift_dataset(
      SyntheticSpec{.train_per_class = 12, .test_per_class = 1, .length = 40, .noise_sigma = 0.05,
                    .seed = 3});
  (void)test;
  TreeContext ctx(train, {MeasureKind::adtw, MeasureKind::cdtw, MeasureKind::lcss}, Rng(31));
  DPWorkspace ws;
  const auto root = build_tree(all_items(train), ctx, 5, ws);

  std::size_t total = 0;
  std::vector<const TreeNode*> stack = {root.get()};
  while (!stack.empty()) {
    const TreeNode* node = stack.back();
    stack.pop_back();
    if (const auto* leaf = std::get_if<LeafNode>(&node->content)) {
      total += leaf->train_items.size();
    } else {
      for (const auto& b : std::get<SplitNode>(node->content).branches)
        stack.push_back(b.child.get());
    }
  }
  CHECK(total == train.size());

  // Replaying any training row through the finished tree reaches exactly the
  // leaf that recorded it during growth.
  for (std::uint32_t i = 0; i < train.size(); ++i) {
    QueryView query(train.values(i));
    const LeafNode& leaf = route_to_leaf(*root, query, &ws);
    CHECK(std::count(leaf.train_items.begin(), leaf.train_items.end(), i) == 1);
    CHECK(classify_tree(*root, query, &ws) == leaf.class_index);
  }
}

TEST_CASE("a one-tree forest reproduces a hand-grown tree") {
  Rng gen(37);
  const Dataset data = separated_pair(5, 9, gen);
  ForestConfig config;
  config.tree_count = 1;
  config.candidates = 4;
  config.seed = 97;
  const Forest forest = Forest::train(data, config);

  TreeContext ctx(data, config.measures, Rng::substream(97, 0));
  DPWorkspace ws;
  const auto manual = build_tree(all_items(data), ctx, config.candidates, ws);
  CHECK(node_to_json(forest.tree(0)) == node_to_json(*manual));
}

TEST_CASE("training is reproducible and indifferent to thread count") {
  const auto [train, test] = make_shift_dataset(
      SyntheticSpec{.train_per_class = 10, .test_per_class = 5, .length = 30, .noise_sigma = 0.05,
                    .seed = 11});
  ForestConfig config;
  config.tree_count = 8;
  config.candidates = 3;
  config.seed = 1234;

  config.threads = 1;
  const Forest serial = Forest::train(train, config);
  config.threads = 4;  // a real pool even when the host has one core
  const Forest parallel = Forest::train(train, config);

  CHECK(serial.to_json().dump() == parallel.to_json().dump());
  CHECK(serial.predict_batch(test) == parallel.predict_batch(test, 4));
  CHECK(serial.tree_count() == 8);
  CHECK(serial.train_seconds() >= 0.0);
  CHECK(serial.tree_seconds().size() == 8);
}

TEST_CASE("votes, probabilities and predictions agree with each other") {
  Rng gen(41);
  const Dataset train = separated_pair(6, 10, gen);
  const Dataset queries = separated_pair(3, 10, gen);
  ForestConfig config;
  config.tree_count = 7;
  config.candidates = 3;
  config.seed = 5;
  const Forest forest = Forest::train(train, config);

  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto votes = forest.vote_counts(queries.series(i));
    REQUIRE(votes.size() == train.class_count());
    CHECK(std::accumulate(votes.begin(), votes.end(), std::size_t{0}) == forest.tree_count());

    const auto proba = forest.predict_proba(queries.series(i));
    double sum = 0.0;
    for (std::size_t c = 0; c < proba.size(); ++c) {
      CHECK(proba[c] == doctest::Approx(static_cast<double>(votes[c]) / 7.0).epsilon(1e-15));
      sum += proba[c];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    const auto predicted = forest.predict_index(queries.series(i));
    CHECK(predicted == argmax_tie_lowest<std::size_t>(votes));
    CHECK(forest.predict(queries.series(i)) == train.classes()[predicted]);
  }

  // The easy geometry should be classified perfectly.
  const auto batch = forest.predict_batch(queries);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    CHECK(batch[i] == queries.label_name(i));
  }
}

TEST_CASE("queries of the wrong length are rejected") {
  Rng gen(47);
  const Dataset train = separated_pair(4, 8, gen);
  ForestConfig config;
  config.tree_count = 2;
  config.candidates = 2;
  config.seed = 1;
  const Forest forest = Forest::train(train, config);

  const TimeSeries off_length({1.0, 2.0, 3.0}, "lo");
  CHECK_THROWS_AS((void)forest.vote_counts(off_length), FormatError);
  CHECK_THROWS_AS((void)forest.predict(off_length), FormatError);

  const Dataset bad_batch({TimeSeries({1.0, 2.0}, "lo"), TimeSeries({3.0, 4.0}, "hi")});
  CHECK_THROWS_AS((void)forest.predict_batch(bad_batch), FormatError);
}

TEST_CASE("forest training validates its configuration") {
  Rng gen(53);
  const Dataset train = separated_pair(3, 6, gen);
  ForestConfig config;
  config.tree_count = 0;
  CHECK_THROWS_AS(Forest::train(train, config), std::invalid_argument);
  config.tree_count = 1;
  config.candidates = 0;
  CHECK_THROWS_AS(Forest::train(train, config), std::invalid_argument);
  config.candidates = 1;
  config.measures.clear();
  CHECK_THROWS_AS(Forest::train(train, config), std::invalid_argument);
}

TEST_CASE("forests vote with ties resolved toward the lower class index") {
  // Build a 2-tree forest by hand through JSON so the vote is exactly split.
  const nlohmann::json leaf0 = {{"leaf", 0}};
  const nlohmann::json leaf1 = {{"leaf", 1}};
  const nlohmann::json model = {
      {"format", "pforest-model"},
      {"version", 1},
      {"length", 2},
      {"classes", {"first", "second"}},
      {"config",
       {{"trees", 2}, {"candidates", 1}, {"seed", 0}, {"measures", {"adtw"}}}},
      {"trees", {leaf0, leaf1}}};
  const Forest forest = Forest::from_json(model);
  const TimeSeries query({0.0, 0.0}, "?");
  const auto votes = forest.vote_counts(query);
  CHECK(votes == std::vector<std::size_t>{1, 1});
  CHECK(forest.predict(query) == "first");
}
