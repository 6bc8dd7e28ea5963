#include "pf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "pf/errors.hpp"
#include "pf/rng.hpp"

namespace pf {
namespace {

double population_sigma(const std::vector<std::vector<double>>& rows) {
  std::size_t count = 0;
  double sum = 0.0;
  for (const auto& row : rows) {
    for (const double v : row) sum += v;
    count += row.size();
  }
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const auto& row : rows) {
    for (const double v : row) {
      const double d = v - mean;
      sq += d * d;
    }
  }
  return std::sqrt(sq / static_cast<double>(count));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

char delimiter_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ',' : '\t';
}

}  // namespace

Dataset::Dataset(std::vector<TimeSeries> series)
    : series_(std::move(series)), derivative_(std::make_unique<DerivativeCache>()) {
  if (series_.empty()) throw std::invalid_argument("dataset must contain at least one series");
  length_ = series_.front().length();
  labels_.reserve(series_.size());
  std::unordered_map<std::string, std::uint32_t> index_of;
  for (const auto& s : series_) {
    if (!s.label()) throw std::invalid_argument("every dataset series needs a label");
    if (s.length() != length_) throw std::invalid_argument("all series must share one length");
    auto [it, inserted] = index_of.try_emplace(*s.label(), static_cast<std::uint32_t>(classes_.size()));
    if (inserted) classes_.push_back(*s.label());
    labels_.push_back(it->second);
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(series_.size());
  for (const auto& s : series_) rows.emplace_back(s.values().begin(), s.values().end());
  sigma_raw_ = population_sigma(rows);
}

Dataset::Dataset(const Dataset& other)
    : series_(other.series_),
      labels_(other.labels_),
      classes_(other.classes_),
      length_(other.length_),
      sigma_raw_(other.sigma_raw_),
      derivative_(std::make_unique<DerivativeCache>()) {}

Dataset& Dataset::operator=(const Dataset& other) {
  if (this != &other) {
    series_ = other.series_;
    labels_ = other.labels_;
    classes_ = other.classes_;
    length_ = other.length_;
    sigma_raw_ = other.sigma_raw_;
    derivative_ = std::make_unique<DerivativeCache>();
  }
  return *this;
}

void Dataset::ensure_derivatives() const {
  std::call_once(derivative_->once, [this] {
    auto& rows = derivative_->rows;
    rows.reserve(series_.size());
    for (const auto& s : series_) rows.push_back(first_derivative(s.values()));
    derivative_->sigma = population_sigma(rows);
  });
}

std::span<const double> Dataset::values(std::size_t i, TransformKind kind) const {
  if (kind == TransformKind::raw) return series_[i].values();
  ensure_derivatives();
  return derivative_->rows[i];
}

double Dataset::sigma(TransformKind kind) const {
  if (kind == TransformKind::raw) return sigma_raw_;
  ensure_derivatives();
  return derivative_->sigma;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(classes_.size(), 0);
  for (const std::uint32_t label : labels_) ++counts[label];
  return counts;
}

Dataset Dataset::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path.string());
  std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failure: " + path.string());

  const char delim = delimiter_for(path);
  std::vector<TimeSeries> rows;
  std::size_t expected_fields = 0;
  std::size_t line_no = 0;
  std::string_view rest(content);
  while (!rest.empty()) {
    ++line_no;
    const std::size_t eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    rest = (eol == std::string_view::npos) ? std::string_view{} : rest.substr(eol + 1);
    if (trim(line).empty()) continue;

    std::vector<std::string_view> fields;
    std::string_view cursor = line;
    for (;;) {
      const std::size_t pos = cursor.find(delim);
      fields.push_back(cursor.substr(0, pos));
      if (pos == std::string_view::npos) break;
      cursor = cursor.substr(pos + 1);
    }
    if (expected_fields == 0) {
      expected_fields = fields.size();
      if (expected_fields < 3) {
        throw FormatError(location(path, line_no) + ": a series needs a label and at least 2 values");
      }
    } else if (fields.size() != expected_fields) {
      throw FormatError(location(path, line_no) + ": expected " + std::to_string(expected_fields) +
                        " fields, found " + std::to_string(fields.size()));
    }

    const std::string_view label = trim(fields[0]);
    if (label.empty()) throw FormatError(location(path, line_no) + ": empty label");

    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const std::string_view tok = trim(fields[k]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw FormatError(location(path, line_no) + ": field " + std::to_string(k + 1) +
                          ": cannot parse '" + std::string(tok) + "' as a number");
      }
      if (!std::isfinite(v)) {
        throw FormatError(location(path, line_no) + ": field " + std::to_string(k + 1) +
                          ": non-finite value");
      }
      values.push_back(v);
    }
    rows.emplace_back(std::move(values), std::string(label));
  }
  if (rows.empty()) throw FormatError(path.string() + ": empty dataset (no data rows)");
  return Dataset(std::move(rows));
}

void Dataset::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path.string());
  const char delim = delimiter_for(path);
  char buf[64];
  for (std::size_t i = 0; i < series_.size(); ++i) {
    out << label_name(i);
    for (const double v : series_[i].values()) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << delim << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
      (void)ec;
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failure: " + path.string());
}

Dataset znormalized(const Dataset& data) {
  std::vector<TimeSeries> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto values = data.values(i);
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    double sq = 0.0;
    for (const double v : values) sq += (v - mean) * (v - mean);
    const double sigma = std::sqrt(sq / n);
    std::vector<double> scaled(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
      scaled[t] = sigma > 0.0 ? (values[t] - mean) / sigma : 0.0;
    }
    out.emplace_back(std::move(scaled), *data.series(i).label());
  }
  return Dataset(std::move(out));
}

ResamplePlan ResamplePlan::from_split(std::uint64_t seed, std::size_t fold, const Dataset& train,
                                      const Dataset& test) {
  const double total = static_cast<double>(train.size() + test.size());
  return ResamplePlan{seed, fold, static_cast<double>(train.size()) / total};
}

std::pair<Dataset, Dataset> stratified_resample(const Dataset& train, const Dataset& test,
                                                const ResamplePlan& plan) {
  if (train.length() != test.length()) {
    throw FormatError("resample: train and test series lengths differ (" +
                      std::to_string(train.length()) + " vs " + std::to_string(test.length()) + ")");
  }
  auto sorted_classes = [](const Dataset& d) {
    std::vector<std::string> names = d.classes();
    std::sort(names.begin(), names.end());
    return names;
  };
  if (sorted_classes(train) != sorted_classes(test)) {
    throw FormatError("resample: train and test class sets differ");
  }
  if (!(plan.train_fraction > 0.0 && plan.train_fraction < 1.0)) {
    throw std::invalid_argument("resample: train_fraction must lie in (0, 1)");
  }
  if (plan.fold == 0) return {train, test};

  // Pool = train rows then test rows; class order is the train split's order.
  const std::size_t pool_size = train.size() + test.size();
  auto pooled_series = [&](std::size_t p) -> const TimeSeries& {
    return p < train.size() ? train.series(p) : test.series(p - train.size());
  };
  const std::vector<std::string>& classes = train.classes();
  auto class_of = [&](std::size_t p) -> const std::string& {
    return p < train.size() ? train.label_name(p) : test.label_name(p - train.size());
  };
  std::vector<std::vector<std::size_t>> members(classes.size());
  for (std::size_t p = 0; p < pool_size; ++p) {
    const auto it = std::find(classes.begin(), classes.end(), class_of(p));
    members[static_cast<std::size_t>(it - classes.begin())].push_back(p);
  }

  std::size_t target_train =
      static_cast<std::size_t>(std::llround(plan.train_fraction * static_cast<double>(pool_size)));
  target_train = std::clamp<std::size_t>(target_train, 1, pool_size - 1);

  // Largest-remainder apportionment of the train quota across classes.
  std::vector<std::size_t> take(classes.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const double quota = plan.train_fraction * static_cast<double>(members[c].size());
    take[c] = static_cast<std::size_t>(quota);
    assigned += take[c];
    remainders.emplace_back(quota - static_cast<double>(take[c]), c);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; assigned < target_train && k < remainders.size(); ++k) {
    const std::size_t c = remainders[k].second;
    if (take[c] < members[c].size()) {
      ++take[c];
      ++assigned;
    }
  }

  Rng rng = Rng::substream(plan.seed, plan.fold);
  std::vector<TimeSeries> new_train, new_test;
  new_train.reserve(target_train);
  new_test.reserve(pool_size - target_train);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    rng.shuffle(members[c]);
    for (std::size_t k = 0; k < members[c].size(); ++k) {
      (k < take[c] ? new_train : new_test).push_back(pooled_series(members[c][k]));
    }
  }
  return {Dataset(std::move(new_train)), Dataset(std::move(new_test))};
}

}  // namespace pf
