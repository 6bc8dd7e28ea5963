#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "pf/time_series.hpp"

namespace pf {

enum class TransformKind : std::uint8_t { raw = 0, first_derivative = 1 };

inline constexpr std::array<TransformKind, 2> kAllTransforms = {
    TransformKind::raw, TransformKind::first_derivative};

std::string_view to_string(TransformKind kind);
TransformKind transform_from_string(std::string_view name);

// Smoothed first derivative. Interior points average the backward difference
// with half the centered difference:
//   d[t] = ((v[t] - v[t-1]) + (v[t+1] - v[t-1]) / 2) / 2
// Endpoints copy their nearest interior value, so the output has the same
// length as the input. Requires length >= 2; for length 2 both outputs equal
// the single available difference v[1] - v[0].
std::vector<double> first_derivative(std::span<const double> values);

// Apply a transform to a labelled series (label is preserved).
TimeSeries apply_transform(TransformKind kind, const TimeSeries& series);

// A query plus its lazily derived view, so each transform is computed at most
// once however many trees or measures inspect the query.
class QueryView {
public:
  explicit QueryView(std::span<const double> raw) : raw_(raw) {}
  std::span<const double> view(TransformKind kind) const;

private:
  std::span<const double> raw_;
  mutable std::vector<double> derivative_;
};

}  // namespace pf
