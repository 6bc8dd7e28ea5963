#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pf/dataset.hpp"
#include "pf/distances.hpp"
#include "pf/rng.hpp"

namespace pf {

// --- parameter sampling -----------------------------------------------------

// Scale used for adtw penalties: the mean direct-alignment cost between pairs
// of training series under the given transform and exponent. All distinct
// pairs are averaged exactly when there are at most `pair_budget` of them;
// larger datasets are subsampled with that many random pairs.
double adtw_penalty_scale(const Dataset& data, TransformKind transform, CostExponent gamma,
                          Rng& rng, std::size_t pair_budget = 4000);

// Penalty for level i in 1..100: (i/100)^5 * scale. The fifth power
// concentrates the grid near zero, where the measure is most sensitive.
double adtw_omega_for_level(int level, double scale);
double sample_adtw_omega(double scale, Rng& rng);  // level drawn uniformly from 1..100

// Warp windows are drawn from {0, ..., floor((length+1)/4)}.
std::size_t max_warp_window(std::size_t length);
std::size_t sample_warp_window(std::size_t length, Rng& rng);

// LCSS thresholds are uniform in [sigma/5, sigma]. A zero sigma (constant
// data) degenerates to the smallest positive double so that only exact value
// matches count.
double sample_lcss_epsilon(double sigma, Rng& rng);

// --- candidate splitters ----------------------------------------------------

struct ExemplarRef {
  std::uint32_t class_index;  // class of the exemplar
  std::uint32_t train_index;  // row in the training dataset
};

// One exemplar-based test: route a series to the exemplar nearest under the
// measure, computed on the transformed view. Exemplars are ordered by class
// index; that order breaks distance ties.
struct Splitter {
  MeasureParams measure;
  TransformKind transform = TransformKind::raw;
  std::vector<ExemplarRef> exemplars;
};

// Per-tree state: the training data, the measure families to draw from, the
// tree's private random stream, and adtw penalty scales sampled once at the
// root for each (transform, exponent) combination.
class TreeContext {
public:
  TreeContext(const Dataset& data, std::vector<MeasureKind> measure_pool, Rng rng);

  const Dataset& data() const { return *data_; }
  const std::vector<MeasureKind>& measure_pool() const { return pool_; }
  double penalty_scale(TransformKind transform, CostExponent gamma) const;
  Rng& rng() { return rng_; }

private:
  const Dataset* data_;
  std::vector<MeasureKind> pool_;
  std::array<double, 6> scales_{};
  Rng rng_;
};

// Draw one random candidate: measure family uniform over the pool, transform
// uniform, family parameters from their samplers, then one exemplar per class
// present among `node_items`, uniform within the class.
Splitter gen_candidate_splitter(std::span<const std::uint32_t> node_items, TreeContext& ctx);

// Route each node item to its nearest exemplar. The result has one bucket per
// exemplar, aligned with splitter.exemplars; buckets may be empty. Earlier
// exemplars win ties. Distances use best-so-far cutoffs, which cannot change
// the routing.
std::vector<std::vector<std::uint32_t>> partition_by_splitter(const Splitter& splitter,
                                                              std::span<const std::uint32_t> node_items,
                                                              const Dataset& data,
                                                              DPWorkspace* ws = nullptr);

// --- split quality ----------------------------------------------------------

// Gini impurity of a class histogram: 1 - sum((c/n)^2). Empty counts as pure.
double gini_impurity(std::span<const std::size_t> counts);

// Weighted impurity decrease from parent to children.
double split_gain(std::span<const std::size_t> parent_counts,
                  const std::vector<std::vector<std::size_t>>& child_counts);

// Gain of a concrete partition of `node_items`.
double split_gain(const Dataset& data, std::span<const std::uint32_t> node_items,
                  const std::vector<std::vector<std::uint32_t>>& buckets);

}  // namespace pf
