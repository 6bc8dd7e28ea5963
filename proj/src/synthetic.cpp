#include "pf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pf/rng.hpp"
#include "pf/time_series.hpp"

namespace pf {
namespace {

struct ClassShape {
  const char* label;
  double signs[3];
};

// The two full-size bumps are shared noise: their jitter dominates any
// lock-step comparison. The third bump is the only class evidence, kept small
// so rigid alignment can barely hear it while elastic measures, which cancel
// the jitter, see it at full contrast.
constexpr ClassShape kShapes[2] = {
    {"pos", {+1.0, -1.0, +0.4}},
    {"neg", {+1.0, -1.0, -0.4}},
};

void append_class_block(std::vector<TimeSeries>& out, const ClassShape& shape,
                        const SyntheticSpec& spec, std::size_t count, Rng& rng) {
  const double length = static_cast<double>(spec.length);
  const double jitter = length / 10.0;
  const double centers[3] = {0.2 * length, 0.5 * length, 0.8 * length};
  const double sigma_b = std::max(1.0, length / 100.0);
  const double denom = 2.0 * sigma_b * sigma_b;

  std::vector<double> values(spec.length);
  for (std::size_t s = 0; s < count; ++s) {
    double c[3];
    for (int k = 0; k < 3; ++k) c[k] = centers[k] + rng.real(-jitter, jitter);
    for (std::size_t t = 0; t < spec.length; ++t) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double d = static_cast<double>(t) - c[k];
        v += shape.signs[k] * std::exp(-(d * d) / denom);
      }
      values[t] = v + spec.noise_sigma * rng.normal();
    }
    out.emplace_back(values, shape.label);
  }
}

Dataset build_split(const SyntheticSpec& spec, std::size_t per_class, Rng rng) {
  std::vector<TimeSeries> rows;
  rows.reserve(per_class * 2);
  for (const ClassShape& shape : kShapes)
    append_class_block(rows, shape, spec, per_class, rng);
  return Dataset(std::move(rows));
}

}  // namespace

std::pair<Dataset, Dataset> make_shift_dataset(const SyntheticSpec& spec) {
  if (spec.length < 2)
    throw std::invalid_argument("synthetic series need length >= 2");
  if (spec.train_per_class == 0 || spec.test_per_class == 0)
    throw std::invalid_argument("synthetic splits need at least 1 series per class");
  if (!(spec.noise_sigma >= 0.0))
    throw std::invalid_argument("synthetic noise sigma must be >= 0");
  return {build_split(spec, spec.train_per_class, Rng::substream(spec.seed, 0)),
          build_split(spec, spec.test_per_class, Rng::substream(spec.seed, 1))};
}

}  // namespace pf
