#include "pf/transforms.hpp"

#include <stdexcept>
#include <string>

namespace pf {

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::raw:
      return "raw";
    case TransformKind::first_derivative:
      return "d1";
  }
  throw std::logic_error("unknown transform kind");
}

TransformKind transform_from_string(std::string_view name) {
  if (name == "raw") return TransformKind::raw;
  if (name == "d1") return TransformKind::first_derivative;
  throw std::invalid_argument("unknown transform: " + std::string(name));
}

std::vector<double> first_derivative(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("first_derivative requires length >= 2");
  std::vector<double> out(n);
  if (n == 2) {
    const double d = values[1] - values[0];
    out[0] = d;
    out[1] = d;
    return out;
  }
  for (std::size_t t = 1; t + 1 < n; ++t) {
    out[t] = ((values[t] - values[t - 1]) + (values[t + 1] - values[t - 1]) / 2.0) / 2.0;
  }
  out[0] = out[1];
  out[n - 1] = out[n - 2];
  return out;
}

TimeSeries apply_transform(TransformKind kind, const TimeSeries& series) {
  if (kind == TransformKind::raw) return series;
  return TimeSeries(first_derivative(series.values()), series.label());
}

std::span<const double> QueryView::view(TransformKind kind) const {
  if (kind == TransformKind::raw) return raw_;
  if (derivative_.empty()) derivative_ = first_derivative(raw_);
  return derivative_;
}

}  // namespace pf
