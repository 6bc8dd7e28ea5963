#include "pf/time_series.hpp"

#include <cmath>
#include <stdexcept>

namespace pf {

TimeSeries::TimeSeries(std::vector<double> values, std::optional<std::string> label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("time series must have length >= 2");
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("time series values must be finite");
    }
  }
}

}  // namespace pf
