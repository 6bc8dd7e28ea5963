#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Exponent applied to pointwise differences: |a-b|^g for g in {1/2, 1, 2}.
enum class CostExponent : std::uint8_t { half = 0, one = 1, two = 2 };

inline constexpr std::array<CostExponent, 3> kAllCostExponents = {
    CostExponent::half, CostExponent::one, CostExponent::two};

double exponent_value(CostExponent g);
std::string_view to_string(CostExponent g);
CostExponent cost_exponent_from_string(std::string_view name);

double point_cost(double a, double b, CostExponent g);

enum class MeasureKind : std::uint8_t { adtw = 0, cdtw = 1, lcss = 2 };

inline constexpr std::array<MeasureKind, 3> kAllMeasureKinds = {
    MeasureKind::adtw, MeasureKind::cdtw, MeasureKind::lcss};

std::string_view to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(std::string_view name);

// Parameterizations of the three elastic measures.
struct AdtwParams {
  double omega = 0.0;  // additive penalty per off-diagonal step, >= 0
  CostExponent gamma = CostExponent::two;
};
struct CdtwParams {
  std::size_t window = 0;  // band half-width: |i-j| <= window
  CostExponent gamma = CostExponent::two;
};
struct LcssParams {
  double epsilon = 0.0;    // match threshold, > 0
  std::size_t window = 0;  // matches require |i-j| <= window
};
using MeasureParams = std::variant<AdtwParams, CdtwParams, LcssParams>;

MeasureKind kind_of(const MeasureParams& params);
std::string describe(const MeasureParams& params);

// Result of a distance evaluation under a cutoff: either the exact distance
// (guaranteed <= cutoff) or the statement that the true distance exceeds the
// cutoff. No in-between: abandoned never hides a value <= cutoff.
class DistanceOutcome {
public:
  static DistanceOutcome exact(double value) { return DistanceOutcome(value, false); }
  static DistanceOutcome abandoned() { return DistanceOutcome(0.0, true); }

  bool early_abandoned() const { return abandoned_; }
  double value() const {
    if (abandoned_) throw std::logic_error("DistanceOutcome: no value, evaluation was abandoned");
    return value_;
  }
  double value_or(double fallback) const { return abandoned_ ? fallback : value_; }

private:
  DistanceOutcome(double value, bool abandoned) : value_(value), abandoned_(abandoned) {}
  double value_;
  bool abandoned_;
};

// Reusable scratch rows so per-call allocations vanish from hot loops. Passing
// nullptr to a kernel falls back to a thread-local workspace.
struct DPWorkspace {
  std::vector<double> cost_row_a, cost_row_b;
  std::vector<std::size_t> len_row_a, len_row_b;
};

// Sum of pointwise costs along the main diagonal (the no-warping alignment).
double direct_alignment(std::span<const double> a, std::span<const double> b, CostExponent g);

// Warping distance with additive penalty `omega` on every non-diagonal step.
// omega = 0 restores unconstrained DTW; omega >= direct alignment cost pins
// the path to the diagonal. Early-abandons when the distance exceeds `cutoff`.
DistanceOutcome adtw(std::span<const double> a, std::span<const double> b, double omega,
                     CostExponent g, double cutoff = kInfinity, DPWorkspace* ws = nullptr);

// DTW constrained to the band |i-j| <= window. window = 0 degenerates to the
// direct alignment; window >= length-1 is unconstrained DTW.
DistanceOutcome cdtw(std::span<const double> a, std::span<const double> b, std::size_t window,
                     CostExponent g, double cutoff = kInfinity, DPWorkspace* ws = nullptr);

// Longest-common-subsequence dissimilarity: 1 - |LCSS| / length, where points
// a_i, b_j match when |a_i - b_j| <= epsilon and |i - j| <= window. Always
// computed in full (no pruning); the value lies in [0, 1].
double lcss(std::span<const double> a, std::span<const double> b, double epsilon,
            std::size_t window, DPWorkspace* ws = nullptr);

// Uniform entry point over MeasureParams with shared cutoff semantics.
DistanceOutcome measure_distance(const MeasureParams& params, std::span<const double> a,
                                 std::span<const double> b, double cutoff = kInfinity,
                                 DPWorkspace* ws = nullptr);

}  // namespace pf
