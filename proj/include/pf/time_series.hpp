#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pf {

// An immutable univariate series with an optional class label.
// Invariants: length >= 2 and every value is finite.
class TimeSeries {
public:
  explicit TimeSeries(std::vector<double> values,
                      std::optional<std::string> label = std::nullopt);

  std::span<const double> values() const { return values_; }
  std::size_t length() const { return values_.size(); }
  const std::optional<std::string>& label() const { return label_; }

private:
  std::vector<double> values_;
  std::optional<std::string> label_;
};

}  // namespace pf
