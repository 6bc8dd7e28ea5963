#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pf/dataset.hpp"
#include "pf/errors.hpp"
#include "pf/forest.hpp"
#include "pf/synthetic.hpp"

#include "test_util.hpp"

using namespace pf;

namespace {

struct Fixture {
  Dataset train;
  Dataset test;
  Forest forest;

  static Fixture make() {
    auto [train, test] = make_shift_dataset(SyntheticSpec{
        .train_per_class = 10, .test_per_class = 8, .length = 32, .noise_sigma = 0.05, .seed = 2});
    ForestConfig config;
    config.tree_count = 6;
    config.candidates = 4;
    config.seed = 77;
    Forest forest = Forest::train(train, config);
    return Fixture{std::move(train), std::move(test), std::move(forest)};
  }
};

}  // namespace

TEST_CASE("model files survive a save/load/save round trip byte for byte") {
  auto fx = Fixture::make();
  pf::testing::TempDir dir;
  const auto path1 = dir.path() / "model.json";
  const auto path2 = dir.path() / "model2.json";

  fx.forest.save(path1);
  const Forest loaded = Forest::load(path1);
  loaded.save(path2);
  CHECK(pf::testing::read_text(path1) == pf::testing::read_text(path2));
  CHECK(!pf::testing::read_text(path1).empty());
  CHECK(pf::testing::read_text(path1).back() == '\n');

  // The in-memory JSON round trip is lossless too.
  CHECK(Forest::from_json(fx.forest.to_json()).to_json() == fx.forest.to_json());
}

TEST_CASE("a reloaded model predicts exactly like the original") {
  auto fx = Fixture::make();
  pf::testing::TempDir dir;
  const auto path = dir.path() / "model.json";
  fx.forest.save(path);
  const Forest loaded = Forest::load(path);

  CHECK(loaded.classes() == fx.forest.classes());
  CHECK(loaded.series_length() == fx.forest.series_length());
  CHECK(loaded.tree_count() == fx.forest.tree_count());
  CHECK(loaded.config().candidates == fx.forest.config().candidates);
  CHECK(loaded.config().seed == fx.forest.config().seed);

  CHECK(loaded.predict_batch(fx.test) == fx.forest.predict_batch(fx.test));
  for (std::size_t i = 0; i < fx.test.size(); ++i) {
    CHECK(loaded.vote_counts(fx.test.series(i)) == fx.forest.vote_counts(fx.test.series(i)));
  }
}

TEST_CASE("malformed model documents are rejected with FormatError") {
  auto fx = Fixture::make();
  nlohmann::json good = fx.forest.to_json();

  SUBCASE("wrong format marker") {
    nlohmann::json j = good;
    j["format"] = "something-else";
    CHECK_THROWS_WITH_AS(Forest::from_json(j), doctest::Contains("format"), FormatError);
  }
  SUBCASE("missing format marker") {
    nlohmann::json j = good;
    j.erase("format");
    CHECK_THROWS_AS(Forest::from_json(j), FormatError);
  }
  SUBCASE("unsupported version") {
    nlohmann::json j = good;
    j["version"] = 999;
    CHECK_THROWS_WITH_AS(Forest::from_json(j), doctest::Contains("version"), FormatError);
  }
  SUBCASE("unknown measure kind") {
    nlohmann::json j = good;
    j["config"]["measures"] = {"xdtw"};
    CHECK_THROWS_AS(Forest::from_json(j), FormatError);
  }
  SUBCASE("empty tree list") {
    nlohmann::json j = good;
    j["trees"] = nlohmann::json::array();
    CHECK_THROWS_WITH_AS(Forest::from_json(j), doctest::Contains("trees"), FormatError);
  }
  SUBCASE("leaf class out of range") {
    nlohmann::json j = good;
    j["trees"] = {nlohmann::json{{"leaf", 17}}};
    CHECK_THROWS_AS(Forest::from_json(j), FormatError);
  }
  SUBCASE("node that is neither leaf nor split") {
    nlohmann::json j = good;
    j["trees"] = {nlohmann::json{{"mystery", 1}}};
    CHECK_THROWS_AS(Forest::from_json(j), FormatError);
  }
  SUBCASE("length below the minimum") {
    nlohmann::json j = good;
    j["length"] = 1;
    CHECK_THROWS_AS(Forest::from_json(j), FormatError);
  }
  SUBCASE("missing config block") {
    nlohmann::json j = good;
    j.erase("config");
    CHECK_THROWS_AS(Forest::from_json(j), FormatError);
  }
  SUBCASE("non-object document") {
    CHECK_THROWS_AS(Forest::from_json(nlohmann::json::array()), FormatError);
  }
}

TEST_CASE("model files with broken JSON or wrong exemplar widths are rejected") {
  auto fx = Fixture::make();
  pf::testing::TempDir dir;

  const auto truncated = dir.path() / "truncated.json";
  fx.forest.save(truncated);
  {
    const std::string full = pf::testing::read_text(truncated);
    pf::testing::write_text(truncated, full.substr(0, full.size() / 2));
  }
  CHECK_THROWS_AS(Forest::load(truncated), FormatError);

  const auto not_json = dir.path() / "notjson.txt";
  pf::testing::write_text(not_json, "this is not a model\n");
  CHECK_THROWS_AS(Forest::load(not_json), FormatError);

  CHECK_THROWS_AS(Forest::load(dir.path() / "does-not-exist.json"), IoError);

  // Corrupt one exemplar's width inside the real document.
  nlohmann::json j = fx.forest.to_json();
  bool corrupted = false;
  for (auto& tree : j["trees"]) {
    if (tree.contains("split")) {
      tree["split"]["branches"][0]["values"] = {1.0};
      corrupted = true;
      break;
    }
  }
  REQUIRE(corrupted);  // the fixture forest always finds at least one split
  CHECK_THROWS_WITH_AS(Forest::from_json(j), doctest::Contains("length"), FormatError);
}

TEST_CASE("saving into an unwritable location raises IoError") {
  auto fx = Fixture::make();
  pf::testing::TempDir dir;
  CHECK_THROWS_AS(fx.forest.save(dir.path() / "no-such-subdir" / "model.json"), IoError);
}
