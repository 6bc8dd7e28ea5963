#pragma once

#include <cstdint>
#include <utility>

#include "pf/dataset.hpp"

namespace pf {

// Two-class benchmark built to embarrass rigid alignment: each series carries
// three Gaussian bumps whose positions jitter independently inside disjoint
// windows. The first two bumps (up, then down) are shared by both classes;
// only the sign of the third bump separates "pos" from "neg". Because the
// jitter space is three-dimensional, nearest neighbors under the direct
// (lock-step) alignment rarely overlap bump-for-bump, while warping measures
// realign them easily.
struct SyntheticSpec {
  std::size_t train_per_class = 100;
  std::size_t test_per_class = 100;
  std::size_t length = 100;
  double noise_sigma = 0.02;
  std::uint64_t seed = 7;
};

// Deterministic in the settings: train draws from substream(seed, 0), test
// from substream(seed, 1). Classes appear as "pos" then "neg".
std::pair<Dataset, Dataset> make_shift_dataset(const SyntheticSpec& spec = {});

}  // namespace pf
