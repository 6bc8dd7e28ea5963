#include "pf/report.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "pf/errors.hpp"

namespace pf {
namespace {

std::string csv_field(std::string_view raw) {
  if (raw.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(raw);
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v,
                    std::chars_format::general, 9);
  if (ec != std::errc()) throw IoError("cannot format numeric report field");
  return std::string(buf.data(), ptr);
}

std::string format_fixed3(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, 3);
  if (ec != std::errc()) throw IoError("cannot format numeric report field");
  return std::string(buf.data(), ptr);
}

// Splits CSV text into records, honoring quoted fields (commas, doubled
// quotes, and even newlines inside quotes).
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted)
          throw FormatError(path + ":" + std::to_string(line) +
                            ": stray quote inside unquoted field");
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes)
    throw FormatError(path + ": unterminated quoted field");
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();
  return records;
}

template <typename T>
T parse_number(const std::string& token, const std::string& path,
               std::size_t record_index, const char* column) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw FormatError(path + ": record " + std::to_string(record_index) +
                      ": cannot parse " + column + " '" + token + "'");
  return value;
}

}  // namespace

std::string format_report_row(const RunReport& report) {
  std::string row;
  row += csv_field(report.dataset);
  row += ',';
  row += csv_field(report.classifier);
  row += ',';
  row += std::to_string(report.fold);
  row += ',';
  row += format_double(report.accuracy);
  row += ',';
  row += format_fixed3(report.train_seconds);
  row += ',';
  row += format_fixed3(report.test_seconds);
  row += ',';
  row += std::to_string(report.trees);
  row += ',';
  row += std::to_string(report.candidates);
  row += ',';
  row += std::to_string(report.seed);
  return row;
}

void write_report_csv(const std::string& path, std::span<const RunReport> rows,
                      bool append) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const bool exists = fs::exists(path, ec);
  if (ec) throw IoError(path + ": " + ec.message());
  bool has_content = false;
  if (append && exists) {
    const auto size = fs::file_size(path, ec);
    if (ec) throw IoError(path + ": " + ec.message());
    has_content = size > 0;
  }

  if (has_content) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::string first_line;
    std::getline(in, first_line);
    if (!first_line.empty() && first_line.back() == '\r') first_line.pop_back();
    if (first_line != kReportHeader)
      throw FormatError(path + ": existing file does not start with the report header");
  }

  std::ofstream out(path, append ? (std::ios::out | std::ios::app)
                                 : (std::ios::out | std::ios::trunc));
  if (!out) throw IoError(path + ": cannot open for writing");
  if (!has_content) out << kReportHeader << '\n';
  for (const RunReport& report : rows) out << format_report_row(report) << '\n';
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

std::vector<RunReport> read_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failed");

  const auto records = parse_csv(buffer.str(), path);
  if (records.empty())
    throw FormatError(path + ": empty report file");
  std::vector<std::string> header_fields;
  {
    std::string_view header = kReportHeader;
    while (!header.empty()) {
      const auto comma = header.find(',');
      header_fields.emplace_back(header.substr(0, comma));
      header = comma == std::string_view::npos ? std::string_view{}
                                               : header.substr(comma + 1);
    }
  }
  if (records.front() != header_fields)
    throw FormatError(path + ": first record is not the report header");

  std::vector<RunReport> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header_fields.size())
      throw FormatError(path + ": record " + std::to_string(r) + ": expected " +
                        std::to_string(header_fields.size()) + " fields, got " +
                        std::to_string(rec.size()));
    RunReport report;
    report.dataset = rec[0];
    report.classifier = rec[1];
    report.fold = parse_number<std::size_t>(rec[2], path, r, "fold");
    report.accuracy = parse_number<double>(rec[3], path, r, "accuracy");
    report.train_seconds = parse_number<double>(rec[4], path, r, "train_s");
    report.test_seconds = parse_number<double>(rec[5], path, r, "test_s");
    report.trees = parse_number<std::size_t>(rec[6], path, r, "k");
    report.candidates = parse_number<std::size_t>(rec[7], path, r, "r");
    report.seed = parse_number<std::uint64_t>(rec[8], path, r, "seed");
    rows.push_back(std::move(report));
  }
  return rows;
}

}  // namespace pf
