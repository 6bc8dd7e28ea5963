#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "pf/rng.hpp"

using pf::Rng;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("below stays in range and hits every value") {
  Rng rng(7);
  std::array<int, 5> seen{};
  for (int i = 0; i < 2000; ++i) {
    const std::size_t v = rng.below(5);
    REQUIRE(v < 5);
    ++seen[v];
  }
  for (const int count : seen) CHECK(count > 300);  // ~400 expected each
}

TEST_CASE("below is unbiased for awkward bounds") {
  // 3 does not divide 2^64; rejection sampling must keep the classes level.
  Rng rng(99);
  std::array<std::size_t, 3> seen{};
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) ++seen[rng.below(3)];
  double chi2 = 0.0;
  for (const auto count : seen) {
    const double expected = draws / 3.0;
    const double d = static_cast<double>(count) - expected;
    chi2 += d * d / expected;
  }
  CHECK(pf::testing::chi_square_p_value(chi2, 2) > 0.001);
}

TEST_CASE("between covers both bounds inclusively") {
  Rng rng(3);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.between(-2, 2);
    REQUIRE(v >= -2);
    REQUIRE(v <= 2);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("unit and real stay inside their half-open intervals") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double r = rng.real(2.5, 4.0);
    REQUIRE(r >= 2.5);
    REQUIRE(r < 4.0);
  }
}

TEST_CASE("substreams with different indices differ, same index agrees") {
  Rng a = Rng::substream(42, 0);
  Rng b = Rng::substream(42, 1);
  Rng c = Rng::substream(42, 0);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    const auto va = a.next_u64();
    const auto vb = b.next_u64();
    if (va != vb) all_equal = false;
    CHECK(va == c.next_u64());
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("shuffle permutes without losing elements") {
  Rng rng(5);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto sorted = v;
  rng.shuffle(v);
  auto resorted = v;
  std::sort(resorted.begin(), resorted.end());
  CHECK(resorted == sorted);
  // With 10! arrangements a fixed point of the identity is overwhelmingly
  // unlikely for this seed; guard against a no-op implementation.
  CHECK(v != sorted);
}

TEST_CASE("normal deviates have roughly standard moments") {
  Rng rng(17);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(var - 1.0) < 0.03);
}
