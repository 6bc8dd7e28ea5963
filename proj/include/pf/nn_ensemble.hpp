#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pf/dataset.hpp"
#include "pf/distances.hpp"
#include "pf/rng.hpp"
#include "pf/transforms.hpp"

namespace pf {

// One point of a tuning grid: a fully parameterized measure plus the view it
// runs on.
struct GridEntry {
  MeasureParams params;
  TransformKind transform = TransformKind::raw;
};

// Candidate grid for one (family, transform) pair:
//   adtw: levels 1..100 of the penalty ramp, for each exponent (the penalty
//         scale comes from the whole training set);
//   cdtw: every window in {0..floor((L+1)/4)}, thinned evenly to at most 100,
//         for each exponent;
//   lcss: 10 thresholds evenly spaced across [sigma/5, sigma] (or the single
//         degenerate threshold when sigma = 0) x 10 evenly spaced windows.
// Entry order is part of the contract: ties in tuning prefer earlier entries.
std::vector<GridEntry> make_measure_grid(const Dataset& train, MeasureKind family,
                                         TransformKind transform, Rng& rng);

// 1NN among training rows under entry.transform. `exclude` skips one training
// row (for leave-one-out); pass SIZE_MAX to use all rows. Earlier rows win
// distance ties. Uses best-so-far cutoffs, which never change the answer.
std::uint32_t nn_classify_index(const Dataset& train, const QueryView& query, const GridEntry& entry,
                                DPWorkspace* ws = nullptr, std::size_t exclude = SIZE_MAX);

// Fraction of training rows whose nearest other row shares their label.
double loocv_accuracy(const Dataset& train, const GridEntry& entry, DPWorkspace* ws = nullptr);

struct GridSearchResult {
  std::size_t best_index = 0;
  double best_accuracy = 0.0;
  std::vector<double> accuracies;  // one per grid entry
};

// Exhaustive leave-one-out search over the grid; earliest best entry wins.
GridSearchResult loocv_tune(const Dataset& train, std::span<const GridEntry> grid,
                            unsigned threads = 1);

struct TunedConstituent {
  MeasureKind family = MeasureKind::adtw;
  GridEntry choice;
  double weight = 0.0;  // the constituent's leave-one-out accuracy
};

// Ensemble of six tuned 1NN classifiers: {adtw, cdtw, lcss} x {raw, d1},
// each voting for one class with its accuracy as the vote weight.
struct NnEnsemble {
  std::vector<TunedConstituent> constituents;
};

// Constituent k tunes on the grid built with substream(seed, k), k following
// the (family, transform) order above, so results do not depend on thread
// count or on which other constituents are trained.
NnEnsemble train_nn_ensemble(const Dataset& train, std::uint64_t seed, unsigned threads = 1);

// A single family tuned across both transforms (raw entries first).
TunedConstituent tune_nn_classifier(const Dataset& train, MeasureKind family, std::uint64_t seed,
                                    unsigned threads = 1);

// Weighted vote over the constituents. Contributions are accumulated in a
// canonical order (per class, weights ascending), so the prediction does not
// depend on how the constituents are arranged; ties go to the lowest class
// index.
std::uint32_t ensemble_predict_index(const NnEnsemble& ensemble, const Dataset& train,
                                     const QueryView& query, DPWorkspace* ws = nullptr);

std::vector<std::string> ensemble_predict_batch(const NnEnsemble& ensemble, const Dataset& train,
                                                const Dataset& queries, unsigned threads = 1);

std::vector<std::string> nn_predict_batch(const Dataset& train, const GridEntry& entry,
                                          const Dataset& queries, unsigned threads = 1);

}  // namespace pf
