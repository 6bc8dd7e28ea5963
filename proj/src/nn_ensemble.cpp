#include "pf/nn_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pf/errors.hpp"
#include "pf/forest.hpp"
#include "pf/parallel.hpp"
#include "pf/splitters.hpp"

namespace pf {
namespace {

// Evenly spaced integers across [0, top], ascending, duplicates removed.
std::vector<std::size_t> spread_integers(std::size_t top, std::size_t count) {
  std::vector<std::size_t> out;
  if (count <= 1 || top == 0) {
    out.push_back(0);
    if (top > 0) out.push_back(top);
    return out;
  }
  for (std::size_t t = 0; t < count; ++t) {
    const double pos = static_cast<double>(t) * static_cast<double>(top) /
                       static_cast<double>(count - 1);
    const auto w = static_cast<std::size_t>(std::llround(pos));
    if (out.empty() || out.back() != w) out.push_back(w);
  }
  return out;
}

std::uint32_t nn_classify_span(const Dataset& train, std::span<const double> query,
                               const MeasureParams& params, TransformKind transform,
                               DPWorkspace* ws, std::size_t exclude) {
  double best = kInfinity;
  std::size_t best_row = SIZE_MAX;
  for (std::size_t j = 0; j < train.size(); ++j) {
    if (j == exclude) continue;
    const auto outcome = measure_distance(params, query, train.values(j, transform), best, ws);
    if (!outcome.early_abandoned() && (best_row == SIZE_MAX || outcome.value() < best)) {
      best = outcome.value();
      best_row = j;
    }
  }
  if (best_row == SIZE_MAX) throw std::invalid_argument("1NN needs at least one reference row");
  return train.label_index(best_row);
}

constexpr std::size_t constituent_ordinal(MeasureKind family, TransformKind transform) {
  return static_cast<std::size_t>(family) * 2 + static_cast<std::size_t>(transform);
}

}  // namespace

std::vector<GridEntry> make_measure_grid(const Dataset& train, MeasureKind family,
                                         TransformKind transform, Rng& rng) {
  std::vector<GridEntry> grid;
  const std::size_t top_window = max_warp_window(train.length());
  switch (family) {
    case MeasureKind::adtw: {
      for (const auto gamma : kAllCostExponents) {
        const double scale = adtw_penalty_scale(train, transform, gamma, rng);
        for (int level = 1; level <= 100; ++level) {
          grid.push_back({AdtwParams{adtw_omega_for_level(level, scale), gamma}, transform});
        }
      }
      break;
    }
    case MeasureKind::cdtw: {
      std::vector<std::size_t> windows;
      if (top_window + 1 <= 100) {
        for (std::size_t w = 0; w <= top_window; ++w) windows.push_back(w);
      } else {
        windows = spread_integers(top_window, 100);
      }
      for (const auto gamma : kAllCostExponents) {
        for (const auto w : windows) grid.push_back({CdtwParams{w, gamma}, transform});
      }
      break;
    }
    case MeasureKind::lcss: {
      const double sigma = train.sigma(transform);
      std::vector<double> epsilons;
      if (sigma > 0.0) {
        const double lo = sigma / 5.0;
        for (int t = 0; t < 10; ++t) {
          epsilons.push_back(lo + static_cast<double>(t) * (sigma - lo) / 9.0);
        }
      } else {
        epsilons.push_back(std::numeric_limits<double>::min());
      }
      const auto windows = spread_integers(top_window, 10);
      for (const double eps : epsilons) {
        for (const auto w : windows) grid.push_back({LcssParams{eps, w}, transform});
      }
      break;
    }
  }
  return grid;
}

std::uint32_t nn_classify_index(const Dataset& train, const QueryView& query, const GridEntry& entry,
                                DPWorkspace* ws, std::size_t exclude) {
  return nn_classify_span(train, query.view(entry.transform), entry.params, entry.transform, ws,
                          exclude);
}

double loocv_accuracy(const Dataset& train, const GridEntry& entry, DPWorkspace* ws) {
  DPWorkspace local;
  DPWorkspace* scratch = ws ? ws : &local;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto predicted = nn_classify_span(train, train.values(i, entry.transform), entry.params,
                                            entry.transform, scratch, i);
    if (predicted == train.label_index(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(train.size());
}

GridSearchResult loocv_tune(const Dataset& train, std::span<const GridEntry> grid,
                            unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("loocv_tune: empty grid");
  if (train.size() < 2) throw std::invalid_argument("loocv_tune: need at least two training rows");
  GridSearchResult result;
  result.accuracies.assign(grid.size(), 0.0);
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    result.accuracies[g] = loocv_accuracy(train, grid[g]);
  });
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (result.accuracies[g] > result.accuracies[result.best_index]) result.best_index = g;
  }
  result.best_accuracy = result.accuracies[result.best_index];
  return result;
}

NnEnsemble train_nn_ensemble(const Dataset& train, std::uint64_t seed, unsigned threads) {
  NnEnsemble ensemble;
  for (const auto family : kAllMeasureKinds) {
    for (const auto transform : kAllTransforms) {
      Rng rng = Rng::substream(seed, constituent_ordinal(family, transform));
      const auto grid = make_measure_grid(train, family, transform, rng);
      const auto tuned = loocv_tune(train, grid, threads);
      ensemble.constituents.push_back(
          TunedConstituent{family, grid[tuned.best_index], tuned.best_accuracy});
    }
  }
  return ensemble;
}

TunedConstituent tune_nn_classifier(const Dataset& train, MeasureKind family, std::uint64_t seed,
                                    unsigned threads) {
  std::vector<GridEntry> grid;
  for (const auto transform : kAllTransforms) {
    Rng rng = Rng::substream(seed, constituent_ordinal(family, transform));
    const auto part = make_measure_grid(train, family, transform, rng);
    grid.insert(grid.end(), part.begin(), part.end());
  }
  const auto tuned = loocv_tune(train, grid, threads);
  return TunedConstituent{family, grid[tuned.best_index], tuned.best_accuracy};
}

std::uint32_t ensemble_predict_index(const NnEnsemble& ensemble, const Dataset& train,
                                     const QueryView& query, DPWorkspace* ws) {
  if (ensemble.constituents.empty()) {
    throw std::invalid_argument("ensemble_predict: no constituents");
  }
  // Gather per-class weights, then sum each class's weights in ascending
  // order: the total is independent of constituent arrangement.
  std::vector<std::vector<double>> contributions(train.class_count());
  for (const auto& constituent : ensemble.constituents) {
    const auto cls = nn_classify_index(train, query, constituent.choice, ws);
    contributions[cls].push_back(constituent.weight);
  }
  std::vector<double> totals(train.class_count(), 0.0);
  for (std::size_t c = 0; c < contributions.size(); ++c) {
    std::sort(contributions[c].begin(), contributions[c].end());
    for (const double w : contributions[c]) totals[c] += w;
  }
  return static_cast<std::uint32_t>(argmax_tie_lowest<double>(totals));
}

std::vector<std::string> ensemble_predict_batch(const NnEnsemble& ensemble, const Dataset& train,
                                                const Dataset& queries, unsigned threads) {
  if (queries.length() != train.length()) {
    throw FormatError("query length " + std::to_string(queries.length()) +
                      " does not match the training length " + std::to_string(train.length()));
  }
  std::vector<std::string> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    DPWorkspace ws;
    QueryView view(queries.values(i));
    out[i] = train.classes()[ensemble_predict_index(ensemble, train, view, &ws)];
  });
  return out;
}

std::vector<std::string> nn_predict_batch(const Dataset& train, const GridEntry& entry,
                                          const Dataset& queries, unsigned threads) {
  if (queries.length() != train.length()) {
    throw FormatError("query length " + std::to_string(queries.length()) +
                      " does not match the training length " + std::to_string(train.length()));
  }
  std::vector<std::string> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    DPWorkspace ws;
    QueryView view(queries.values(i));
    out[i] = train.classes()[nn_classify_index(train, view, entry, &ws)];
  });
  return out;
}

}  // namespace pf
