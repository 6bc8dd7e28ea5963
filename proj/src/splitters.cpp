#include "pf/splitters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace pf {

double adtw_penalty_scale(const Dataset& data, TransformKind transform, CostExponent gamma,
                          Rng& rng, std::size_t pair_budget) {
  const std::size_t n = data.size();
  if (n < 2) return 0.0;
  const std::size_t distinct = n * (n - 1) / 2;
  double sum = 0.0;
  std::size_t count = 0;
  if (distinct <= pair_budget) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        sum += direct_alignment(data.values(i, transform), data.values(j, transform), gamma);
        ++count;
      }
    }
  } else {
    // Sample distinct unordered pairs; redraw on repeats. The budget is
    // strictly below the pair count here, so the loop always terminates.
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(pair_budget * 2);
    while (count < pair_budget) {
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      const std::uint64_t key =
          static_cast<std::uint64_t>(std::min(i, j)) * n + static_cast<std::uint64_t>(std::max(i, j));
      if (!seen.insert(key).second) continue;
      sum += direct_alignment(data.values(i, transform), data.values(j, transform), gamma);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

double adtw_omega_for_level(int level, double scale) {
  return std::pow(static_cast<double>(level) / 100.0, 5.0) * scale;
}

double sample_adtw_omega(double scale, Rng& rng) {
  const int level = 1 + static_cast<int>(rng.below(100));
  return adtw_omega_for_level(level, scale);
}

std::size_t max_warp_window(std::size_t length) { return (length + 1) / 4; }

std::size_t sample_warp_window(std::size_t length, Rng& rng) {
  return rng.below(max_warp_window(length) + 1);
}

double sample_lcss_epsilon(double sigma, Rng& rng) {
  if (!(sigma > 0.0)) return std::numeric_limits<double>::min();
  return rng.real(sigma / 5.0, sigma);
}

TreeContext::TreeContext(const Dataset& data, std::vector<MeasureKind> measure_pool, Rng rng)
    : data_(&data), pool_(std::move(measure_pool)), rng_(rng) {
  if (pool_.empty()) throw std::invalid_argument("measure pool must not be empty");
  // Drop duplicates so pool entries stay equally likely.
  std::vector<MeasureKind> unique;
  for (const auto kind : pool_) {
    if (std::find(unique.begin(), unique.end(), kind) == unique.end()) unique.push_back(kind);
  }
  pool_ = std::move(unique);
  if (std::find(pool_.begin(), pool_.end(), MeasureKind::adtw) != pool_.end()) {
    for (const auto transform : kAllTransforms) {
      for (const auto gamma : kAllCostExponents) {
        scales_[static_cast<std::size_t>(transform) * 3 + static_cast<std::size_t>(gamma)] =
            adtw_penalty_scale(data, transform, gamma, rng_);
      }
    }
  }
}

double TreeContext::penalty_scale(TransformKind transform, CostExponent gamma) const {
  return scales_[static_cast<std::size_t>(transform) * 3 + static_cast<std::size_t>(gamma)];
}

Splitter gen_candidate_splitter(std::span<const std::uint32_t> node_items, TreeContext& ctx) {
  if (node_items.empty()) throw std::invalid_argument("cannot draw a splitter for an empty node");
  Rng& rng = ctx.rng();
  const Dataset& data = ctx.data();

  Splitter splitter;
  const MeasureKind kind = ctx.measure_pool()[rng.below(ctx.measure_pool().size())];
  splitter.transform = kAllTransforms[rng.below(kAllTransforms.size())];
  switch (kind) {
    case MeasureKind::adtw: {
      const CostExponent gamma = kAllCostExponents[rng.below(3)];
      const double omega = sample_adtw_omega(ctx.penalty_scale(splitter.transform, gamma), rng);
      splitter.measure = AdtwParams{omega, gamma};
      break;
    }
    case MeasureKind::cdtw: {
      const CostExponent gamma = kAllCostExponents[rng.below(3)];
      splitter.measure = CdtwParams{sample_warp_window(data.length(), rng), gamma};
      break;
    }
    case MeasureKind::lcss: {
      const double epsilon = sample_lcss_epsilon(data.sigma(splitter.transform), rng);
      splitter.measure = LcssParams{epsilon, sample_warp_window(data.length(), rng)};
      break;
    }
  }

  // One exemplar per class present, drawn uniformly from that class's items;
  // exemplar order follows class index.
  std::vector<std::vector<std::uint32_t>> by_class(data.class_count());
  for (const std::uint32_t item : node_items) by_class[data.label_index(item)].push_back(item);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].empty()) continue;
    const std::uint32_t pick = by_class[c][rng.below(by_class[c].size())];
    splitter.exemplars.push_back(ExemplarRef{static_cast<std::uint32_t>(c), pick});
  }
  return splitter;
}

std::vector<std::vector<std::uint32_t>> partition_by_splitter(const Splitter& splitter,
                                                              std::span<const std::uint32_t> node_items,
                                                              const Dataset& data, DPWorkspace* ws) {
  std::vector<std::vector<std::uint32_t>> buckets(splitter.exemplars.size());
  for (const std::uint32_t item : node_items) {
    const auto query = data.values(item, splitter.transform);
    std::size_t best_branch = 0;
    double best = kInfinity;
    for (std::size_t e = 0; e < splitter.exemplars.size(); ++e) {
      const auto exemplar = data.values(splitter.exemplars[e].train_index, splitter.transform);
      const auto outcome = measure_distance(splitter.measure, query, exemplar, best, ws);
      if (!outcome.early_abandoned() && outcome.value() < best) {
        best = outcome.value();
        best_branch = e;
      }
    }
    buckets[best_branch].push_back(item);
  }
  return buckets;
}

double gini_impurity(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (const std::size_t c : counts) total += c;
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (const std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

double split_gain(std::span<const std::size_t> parent_counts,
                  const std::vector<std::vector<std::size_t>>& child_counts) {
  std::size_t parent_total = 0;
  for (const std::size_t c : parent_counts) parent_total += c;
  if (parent_total == 0) return 0.0;
  double weighted = 0.0;
  for (const auto& child : child_counts) {
    std::size_t child_total = 0;
    for (const std::size_t c : child) child_total += c;
    if (child_total == 0) continue;
    weighted += static_cast<double>(child_total) / static_cast<double>(parent_total) *
                gini_impurity(child);
  }
  return gini_impurity(parent_counts) - weighted;
}

double split_gain(const Dataset& data, std::span<const std::uint32_t> node_items,
                  const std::vector<std::vector<std::uint32_t>>& buckets) {
  const std::size_t classes = data.class_count();
  std::vector<std::size_t> parent(classes, 0);
  for (const std::uint32_t item : node_items) ++parent[data.label_index(item)];
  std::vector<std::vector<std::size_t>> children;
  children.reserve(buckets.size());
  for (const auto& bucket : buckets) {
    std::vector<std::size_t> counts(classes, 0);
    for (const std::uint32_t item : bucket) ++counts[data.label_index(item)];
    children.push_back(std::move(counts));
  }
  return split_gain(parent, children);
}

}  // namespace pf
