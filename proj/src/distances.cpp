#include "pf/distances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pf {
namespace {

struct CostHalf {
  double operator()(double a, double b) const { return std::sqrt(std::fabs(a - b)); }
};
struct CostOne {
  double operator()(double a, double b) const { return std::fabs(a - b); }
};
struct CostTwo {
  double operator()(double a, double b) const {
    const double d = a - b;
    return d * d;
  }
};

template <class Fn>
decltype(auto) with_cost(CostExponent g, Fn&& fn) {
  switch (g) {
    case CostExponent::half:
      return fn(CostHalf{});
    case CostExponent::one:
      return fn(CostOne{});
    case CostExponent::two:
      return fn(CostTwo{});
  }
  throw std::logic_error("unknown cost exponent");
}

DPWorkspace& tls_workspace() {
  thread_local DPWorkspace ws;
  return ws;
}

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("distance kernels need equal-length series");
  if (a.empty()) throw std::invalid_argument("distance kernels need non-empty series");
}

template <class Cost>
double direct_impl(std::span<const double> a, std::span<const double> b, Cost cost) {
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) acc += cost(a[t], b[t]);
  return acc;
}

// Shared DP core for adtw (penalty `omega`, unconstrained band) and cdtw
// (omega = 0, band half-width `window`). Recurrence over the (n+1)x(n+1)
// prefix matrix M, with M(0,0) = 0 and the borders at +infinity:
//
//   M(i,j) = cost(a_i, b_j) + min(M(i-1,j-1), M(i-1,j) + omega, M(i,j-1) + omega)
//
// restricted to |i-j| <= window. The result is M(n,n).
//
// Pruning: the diagonal path is feasible for every (window, omega), so its
// cost is an upper bound on the result; any cell above min(cutoff, bound) can
// never sit on an optimal path with final value <= cutoff. Rows keep a live
// [lo, hi] span of surviving cells; cells past the previous row's reach whose
// left neighbor is dead terminate the row. If a whole row dies the true
// distance provably exceeds the cutoff; otherwise the returned value is the
// exact DP value. EarlyAbandoned therefore happens iff distance > cutoff.
template <class Cost>
DistanceOutcome warp_impl(std::span<const double> a, std::span<const double> b, std::size_t window,
                          double omega, double cutoff, Cost cost, DPWorkspace& ws) {
  const std::size_t n = a.size();
  const std::size_t win = std::min(window, n);

  // Same accumulation order as direct_impl so the omega/window limit cases
  // reproduce the direct alignment bit for bit.
  double bound = 0.0;
  for (std::size_t t = 0; t < n; ++t) bound += cost(a[t], b[t]);
  const double effective = std::min(cutoff, bound);

  ws.cost_row_a.assign(n + 1, kInfinity);
  ws.cost_row_b.assign(n + 1, kInfinity);
  double* prev = ws.cost_row_a.data();
  double* cur = ws.cost_row_b.data();

  prev[0] = 0.0;
  std::size_t prev_lo = 0, prev_hi = 0;  // live cells of the previous row

  for (std::size_t i = 1; i <= n; ++i) {
    const double ai = a[i - 1];
    const std::size_t jlo = (i > win) ? i - win : 1;
    const std::size_t jhi = std::min(n, i + win);
    cur[jlo - 1] = kInfinity;
    std::size_t lo = 0, hi = 0;
    bool any = false;
    for (std::size_t j = jlo; j <= jhi; ++j) {
      if (j > prev_hi + 1 && cur[j - 1] == kInfinity) break;  // unreachable tail
      const double diag = (j - 1 >= prev_lo && j - 1 <= prev_hi) ? prev[j - 1] : kInfinity;
      const double up = (j >= prev_lo && j <= prev_hi) ? prev[j] : kInfinity;
      const double lateral = std::min(up, cur[j - 1]);
      double best = diag;
      if (lateral + omega < best) best = lateral + omega;
      const double v = best + cost(ai, b[j - 1]);
      if (v <= effective) {
        cur[j] = v;
        if (!any) {
          lo = j;
          any = true;
        }
        hi = j;
      } else {
        cur[j] = kInfinity;
      }
    }
    if (!any) return DistanceOutcome::abandoned();
    std::swap(prev, cur);
    prev_lo = lo;
    prev_hi = hi;
  }
  if (prev_hi == n) return DistanceOutcome::exact(prev[n]);
  return DistanceOutcome::abandoned();
}

}  // namespace

double exponent_value(CostExponent g) {
  switch (g) {
    case CostExponent::half:
      return 0.5;
    case CostExponent::one:
      return 1.0;
    case CostExponent::two:
      return 2.0;
  }
  throw std::logic_error("unknown cost exponent");
}

std::string_view to_string(CostExponent g) {
  switch (g) {
    case CostExponent::half:
      return "0.5";
    case CostExponent::one:
      return "1";
    case CostExponent::two:
      return "2";
  }
  throw std::logic_error("unknown cost exponent");
}

CostExponent cost_exponent_from_string(std::string_view name) {
  if (name == "0.5") return CostExponent::half;
  if (name == "1") return CostExponent::one;
  if (name == "2") return CostExponent::two;
  throw std::invalid_argument("unknown cost exponent: " + std::string(name));
}

double point_cost(double a, double b, CostExponent g) {
  return with_cost(g, [&](auto cost) { return cost(a, b); });
}

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::adtw:
      return "adtw";
    case MeasureKind::cdtw:
      return "cdtw";
    case MeasureKind::lcss:
      return "lcss";
  }
  throw std::logic_error("unknown measure kind");
}

MeasureKind measure_kind_from_string(std::string_view name) {
  if (name == "adtw") return MeasureKind::adtw;
  if (name == "cdtw") return MeasureKind::cdtw;
  if (name == "lcss") return MeasureKind::lcss;
  throw std::invalid_argument("unknown measure: " + std::string(name));
}

MeasureKind kind_of(const MeasureParams& params) {
  return std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AdtwParams>) return MeasureKind::adtw;
        if constexpr (std::is_same_v<P, CdtwParams>) return MeasureKind::cdtw;
        if constexpr (std::is_same_v<P, LcssParams>) return MeasureKind::lcss;
      },
      params);
}

std::string describe(const MeasureParams& params) {
  char buf[96];
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AdtwParams>) {
          std::snprintf(buf, sizeof(buf), "adtw(omega=%.6g, gamma=%s)", p.omega,
                        std::string(to_string(p.gamma)).c_str());
        } else if constexpr (std::is_same_v<P, CdtwParams>) {
          std::snprintf(buf, sizeof(buf), "cdtw(window=%zu, gamma=%s)", p.window,
                        std::string(to_string(p.gamma)).c_str());
        } else {
          std::snprintf(buf, sizeof(buf), "lcss(epsilon=%.6g, window=%zu)", p.epsilon, p.window);
        }
      },
      params);
  return buf;
}

double direct_alignment(std::span<const double> a, std::span<const double> b, CostExponent g) {
  check_pair(a, b);
  return with_cost(g, [&](auto cost) { return direct_impl(a, b, cost); });
}

DistanceOutcome adtw(std::span<const double> a, std::span<const double> b, double omega,
                     CostExponent g, double cutoff, DPWorkspace* ws) {
  check_pair(a, b);
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("adtw: omega must be finite and >= 0");
  }
  DPWorkspace& scratch = ws ? *ws : tls_workspace();
  return with_cost(g, [&](auto cost) { return warp_impl(a, b, a.size(), omega, cutoff, cost, scratch); });
}

DistanceOutcome cdtw(std::span<const double> a, std::span<const double> b, std::size_t window,
                     CostExponent g, double cutoff, DPWorkspace* ws) {
  check_pair(a, b);
  DPWorkspace& scratch = ws ? *ws : tls_workspace();
  return with_cost(g, [&](auto cost) { return warp_impl(a, b, window, 0.0, cutoff, cost, scratch); });
}

double lcss(std::span<const double> a, std::span<const double> b, double epsilon,
            std::size_t window, DPWorkspace* ws) {
  check_pair(a, b);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("lcss: epsilon must be >= 0");
  const std::size_t n = a.size();
  const std::size_t win = std::min(window, n);
  DPWorkspace& scratch = ws ? *ws : tls_workspace();
  auto& prev_vec = scratch.len_row_a;
  auto& cur_vec = scratch.len_row_b;
  prev_vec.assign(n + 1, 0);
  cur_vec.assign(n + 1, 0);
  std::size_t* prev = prev_vec.data();
  std::size_t* cur = cur_vec.data();
  for (std::size_t i = 1; i <= n; ++i) {
    const double ai = a[i - 1];
    const std::size_t jlo = (i > win) ? i - win : 1;
    const std::size_t jhi = std::min(n, i + win);
    // Cells left of the band are constant down their column; the previous
    // row's value is exact there.
    cur[jlo - 1] = prev[jlo - 1];
    const std::size_t up_cap = std::min(n, i - 1 + win);  // band edge of the previous row
    for (std::size_t j = jlo; j <= jhi; ++j) {
      if (std::fabs(ai - b[j - 1]) <= epsilon) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[std::min(j, up_cap)], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return 1.0 - static_cast<double>(prev[n]) / static_cast<double>(n);
}

DistanceOutcome measure_distance(const MeasureParams& params, std::span<const double> a,
                                 std::span<const double> b, double cutoff, DPWorkspace* ws) {
  return std::visit(
      [&](const auto& p) -> DistanceOutcome {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AdtwParams>) {
          return adtw(a, b, p.omega, p.gamma, cutoff, ws);
        } else if constexpr (std::is_same_v<P, CdtwParams>) {
          return cdtw(a, b, p.window, p.gamma, cutoff, ws);
        } else {
          const double d = lcss(a, b, p.epsilon, p.window, ws);
          return d <= cutoff ? DistanceOutcome::exact(d) : DistanceOutcome::abandoned();
        }
      },
      params);
}

}  // namespace pf
