#include <doctest.h>

#include <string>
#include <vector>

#include "pf/errors.hpp"
#include "pf/report.hpp"

#include "test_util.hpp"

using namespace pf;

namespace {

RunReport sample(std::string dataset, std::string classifier, std::size_t fold, double acc) {
  RunReport r;
  r.dataset = std::move(dataset);
  r.classifier = std::move(classifier);
  r.fold = fold;
  r.accuracy = acc;
  r.train_seconds = 1.2344;
  r.test_seconds = 0.5;
  r.trees = 20;
  r.candidates = 5;
  r.seed = 42;
  return r;
}

}  // namespace

TEST_CASE("rows are rendered with fixed-point times and terse accuracies") {
  CHECK(format_report_row(sample("synth", "pf2", 0, 0.975)) ==
        "synth,pf2,0,0.975,1.234,0.500,20,5,42");
  CHECK(format_report_row(sample("synth", "pf2", 3, 1.0)) ==
        "synth,pf2,3,1,1.234,0.500,20,5,42");
  CHECK(format_report_row(sample("synth", "pf2", 0, 1.0 / 3.0)) ==
        "synth,pf2,0,0.333333333,1.234,0.500,20,5,42");
  CHECK(std::string(kReportHeader) == "dataset,classifier,fold,accuracy,train_s,test_s,k,r,seed");
}

TEST_CASE("fields with commas or quotes are quoted and survive a round trip") {
  const RunReport tricky = sample("my,data\"set", "nn:adtw", 1, 0.5);
  const std::string row = format_report_row(tricky);
  CHECK(row == "\"my,data\"\"set\",nn:adtw,1,0.5,1.234,0.500,20,5,42");

  pf::testing::TempDir dir;
  const auto path = dir.file("report.csv");
  write_report_csv(path.string(), std::vector<RunReport>{tricky}, false);
  const auto rows = read_report_csv(path.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].dataset == "my,data\"set");
  CHECK(rows[0].classifier == "nn:adtw");
  CHECK(rows[0].fold == 1);
  CHECK(rows[0].accuracy == 0.5);
  CHECK(rows[0].train_seconds == 1.234);
  CHECK(rows[0].test_seconds == 0.5);
  CHECK(rows[0].trees == 20);
  CHECK(rows[0].candidates == 5);
  CHECK(rows[0].seed == 42);
}

TEST_CASE("writing starts with the header and appending never repeats it") {
  pf::testing::TempDir dir;
  const auto path = dir.file("report.csv");

  write_report_csv(path.string(), std::vector<RunReport>{sample("d1", "pf2", 0, 1.0)}, false);
  std::string text = pf::testing::read_text(path);
  CHECK(text == std::string(kReportHeader) + "\nd1,pf2,0,1,1.234,0.500,20,5,42\n");

  write_report_csv(path.string(), std::vector<RunReport>{sample("d2", "pf2", 1, 0.5)}, true);
  text = pf::testing::read_text(path);
  CHECK(text == std::string(kReportHeader) +
                    "\nd1,pf2,0,1,1.234,0.500,20,5,42\n"
                    "d2,pf2,1,0.5,1.234,0.500,20,5,42\n");

  const auto rows = read_report_csv(path.string());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].dataset == "d1");
  CHECK(rows[1].dataset == "d2");

  // Overwriting resets the file.
  write_report_csv(path.string(), std::vector<RunReport>{sample("d3", "pf2", 0, 0.25)}, false);
  const auto fresh = read_report_csv(path.string());
  REQUIRE(fresh.size() == 1);
  CHECK(fresh[0].dataset == "d3");
}

TEST_CASE("appending to an empty file writes the header first") {
  pf::testing::TempDir dir;
  const auto path = dir.file("empty.csv");
  pf::testing::write_text(path, "");
  write_report_csv(path.string(), std::vector<RunReport>{sample("d", "pf2", 0, 1.0)}, true);
  const auto rows = read_report_csv(path.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].dataset == "d");

  // Appending to a missing file also creates header plus rows.
  const auto path2 = dir.file("missing.csv");
  write_report_csv(path2.string(), std::vector<RunReport>{sample("m", "pf2", 0, 1.0)}, true);
  CHECK(read_report_csv(path2.string()).size() == 1);
}

TEST_CASE("appending refuses files that do not open with the report header") {
  pf::testing::TempDir dir;
  const auto path = dir.file("other.csv");
  pf::testing::write_text(path, "time,value\n1,2\n");
  CHECK_THROWS_AS(
      write_report_csv(path.string(), std::vector<RunReport>{sample("d", "pf2", 0, 1.0)}, true),
      FormatError);
}

TEST_CASE("reading rejects missing files, bad headers and bad records") {
  pf::testing::TempDir dir;
  CHECK_THROWS_AS(read_report_csv((dir.path() / "nope.csv").string()), IoError);

  const auto bad_header = dir.file("bad_header.csv");
  pf::testing::write_text(bad_header, "a,b,c\n");
  CHECK_THROWS_AS(read_report_csv(bad_header.string()), FormatError);

  const auto short_row = dir.file("short.csv");
  pf::testing::write_text(short_row, std::string(kReportHeader) + "\nonly,three,fields\n");
  CHECK_THROWS_WITH_AS(read_report_csv(short_row.string()), doctest::Contains("expected 9"),
                       FormatError);

  const auto bad_number = dir.file("badnum.csv");
  pf::testing::write_text(bad_number,
                          std::string(kReportHeader) + "\nd,pf2,zero,1,1.0,1.0,20,5,42\n");
  CHECK_THROWS_WITH_AS(read_report_csv(bad_number.string()), doctest::Contains("fold"),
                       FormatError);

  const auto empty = dir.file("empty.csv");
  pf::testing::write_text(empty, "");
  CHECK_THROWS_AS(read_report_csv(empty.string()), FormatError);
}

TEST_CASE("windows-style line endings are tolerated on read") {
  pf::testing::TempDir dir;
  const auto path = dir.file("crlf.csv");
  pf::testing::write_text(path, std::string(kReportHeader) +
                                    "\r\nd,pf2,0,0.75,1.000,2.000,10,3,7\r\n");
  const auto rows = read_report_csv(path.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].accuracy == 0.75);
  CHECK(rows[0].trees == 10);
}
