#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pf {

// One benchmark run: a (dataset, classifier, fold) cell plus its scores.
// `predictions` is carried for callers that want per-query output; it never
// enters the CSV.
struct RunReport {
  std::string dataset;
  std::string classifier;
  std::size_t fold = 0;
  double accuracy = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  std::size_t trees = 0;       // "k" column
  std::size_t candidates = 0;  // "r" column
  std::uint64_t seed = 0;
  std::vector<std::string> predictions;
};

inline constexpr const char* kReportHeader =
    "dataset,classifier,fold,accuracy,train_s,test_s,k,r,seed";

std::string format_report_row(const RunReport& report);

// Appends rows to `path`. The header line is written only when the file is
// missing or empty; when appending to existing content the first line must
// already be the expected header (FormatError otherwise). IoError on any
// filesystem failure.
void write_report_csv(const std::string& path, std::span<const RunReport> rows,
                      bool append);

std::vector<RunReport> read_report_csv(const std::string& path);

}  // namespace pf
