#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pf {

// Deterministic random source. Wraps std::mt19937_64 (whose output sequence is
// fixed by the standard) but avoids std::uniform_*_distribution, whose mapping
// from raw bits to values is implementation-defined. Every derived quantity
// here is computed with explicit, portable arithmetic so that a given seed
// produces identical draws on every platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Decorrelated child stream: hashes (master, index) through splitmix64 so
  // that nearby indices yield unrelated engine states.
  static Rng substream(std::uint64_t master, std::uint64_t index) {
    const std::uint64_t mixed =
        splitmix64(splitmix64(master) ^ splitmix64(index + 0x9E3779B97F4A7C15ull));
    return Rng(mixed);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). Rejection sampling removes modulo bias.
  std::size_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // (2^64 - n) mod n
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<std::size_t>(r % n);
    }
  }

  // Uniform integer in [lo, hi], both bounds included.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  // Uniform real in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform real in [lo, hi).
  double real(double lo, double hi) { return lo + unit() * (hi - lo); }

  // Standard normal deviate via Box-Muller (portable, unlike
  // std::normal_distribution).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();  // avoid log(0)
    const double u2 = unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // In-place Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pf
