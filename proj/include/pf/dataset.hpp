#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pf/time_series.hpp"
#include "pf/transforms.hpp"

namespace pf {

// A labelled collection of equal-length series. Class names are assigned dense
// indices in order of first appearance; that order is the canonical tie-break
// order everywhere (leaf majorities, vote ties, nearest-exemplar ties).
//
// Derivative views and the derivative standard deviation are computed lazily
// on first use and cached; the cache is thread-safe and does not affect the
// logical state, so Dataset is safe to share read-only across threads.
class Dataset {
public:
  explicit Dataset(std::vector<TimeSeries> series);

  Dataset(const Dataset& other);
  Dataset& operator=(const Dataset& other);
  Dataset(Dataset&&) noexcept = default;
  Dataset& operator=(Dataset&&) noexcept = default;

  // Load a UCR-style delimited file: one series per row, label in the first
  // field, then the values. Tab-separated by default; comma-separated when the
  // extension is .csv. Throws FormatError / IoError.
  static Dataset load(const std::filesystem::path& path);

  // Write in the same format (delimiter chosen by extension). Values are
  // printed with shortest round-trip precision, so load(save(x)) == x bitwise.
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return series_.size(); }
  std::size_t length() const { return length_; }
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }

  const TimeSeries& series(std::size_t i) const { return series_[i]; }
  std::uint32_t label_index(std::size_t i) const { return labels_[i]; }
  const std::string& label_name(std::size_t i) const { return classes_[labels_[i]]; }

  // Values of series i under a transform. The derivative view is materialized
  // once for the whole dataset on first request.
  std::span<const double> values(std::size_t i, TransformKind kind = TransformKind::raw) const;

  // Population standard deviation of all values in the dataset under a
  // transform (single pool over every observation of every series).
  double sigma(TransformKind kind) const;

  // Number of series per class, indexed by class index.
  std::vector<std::size_t> class_counts() const;

private:
  struct DerivativeCache {
    std::once_flag once;
    std::vector<std::vector<double>> rows;
    double sigma = 0.0;
  };

  void ensure_derivatives() const;

  std::vector<TimeSeries> series_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::string> classes_;
  std::size_t length_ = 0;
  double sigma_raw_ = 0.0;
  std::unique_ptr<DerivativeCache> derivative_;
};

// Recipe for one deterministic stratified shuffle of a train/test split.
struct ResamplePlan {
  std::uint64_t seed = 0;
  std::size_t fold = 0;
  double train_fraction = 0.0;  // in (0, 1)

  // Plan that keeps the original train/test sizes.
  static ResamplePlan from_split(std::uint64_t seed, std::size_t fold,
                                 const Dataset& train, const Dataset& test);
};

// Per-series z-normalization: each series is shifted to mean 0 and scaled to
// population standard deviation 1 (constant series become all zeros).
Dataset znormalized(const Dataset& data);

// Merge train and test into one pool and deal out a fresh split of the same
// total size. Per-class train counts follow the pool's class proportions via
// largest-remainder rounding (within +/-1 of exact proportionality). Fold 0
// returns the original split verbatim; any (seed, fold) pair is reproducible.
// Requires matching series lengths and equal class sets.
std::pair<Dataset, Dataset> stratified_resample(const Dataset& train, const Dataset& test,
                                                const ResamplePlan& plan);

}  // namespace pf
