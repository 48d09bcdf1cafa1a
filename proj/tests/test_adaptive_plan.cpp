#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fracdiff/adaptive_plan.hpp"

using namespace fracdiff;

TEST_CASE("plan covers the base interval verbatim") {
  const auto plan = adaptive_plan(4, 4);
  REQUIRE(plan.size() == 5);
  for (std::int64_t m = 0; m <= 4; ++m) {
    CHECK(plan[m].lag == m);
    CHECK(plan[m].weight == 1);
  }
}

TEST_CASE("worked plan at a = 4, n = 16") {
  // base lags 0..4 at weight 1, then one fully tiled band sampled every
  // third lag at weight 3, with no remainder
  const auto plan = adaptive_plan(4, 16);
  REQUIRE(plan.size() == 9);
  const std::int64_t lags[] = {0, 1, 2, 3, 4, 6, 9, 12, 15};
  const std::int64_t weights[] = {1, 1, 1, 1, 1, 3, 3, 3, 3};
  for (std::size_t i = 0; i < plan.size(); ++i) {
    CHECK(plan[i].lag == lags[i]);
    CHECK(plan[i].weight == weights[i]);
  }
  std::int64_t total = 0;
  for (const auto& e : plan) total += e.weight;
  CHECK(total == 17);
}

TEST_CASE("band index helpers") {
  CHECK(band_count(4, 16) == 2);
  CHECK(band_count(4, 17) == 3);
  CHECK(band_count(4, 64) == 3);
  CHECK(band_samples(4, 2, 16) == 4);
  CHECK(band_offset(4, 2, 1) == 6);
  CHECK(band_offset(4, 2, 4) == 15);
}

TEST_CASE("plan weights always sum to n + 1") {
  for (std::int64_t a = 2; a <= 10; ++a)
    for (std::int64_t n = 0; n <= 2000; ++n) {
      std::int64_t total = 0;
      for (const auto& e : adaptive_plan(a, n)) total += e.weight;
      REQUIRE(total == n + 1);
    }
}

TEST_CASE("plan lags are strictly ascending and within range") {
  for (std::int64_t a : {2, 3, 5, 8, 20})
    for (std::int64_t n : {1, 7, 63, 64, 65, 500, 1999}) {
      const auto plan = adaptive_plan(a, n);
      std::int64_t prev = -1;
      for (const auto& e : plan) {
        REQUIRE(e.lag > prev);
        REQUIRE(e.lag <= n);
        REQUIRE(e.weight >= 1);
        prev = e.lag;
      }
    }
}

TEST_CASE("per-step plan length respects the banded bound") {
  // length <= (a+1) + sum_s [(a^s - a^(s-1))/(2s-1) + (2s-1)]
  for (std::int64_t a : {4, 8, 20})
    for (std::int64_t n : {100, 500, 2000}) {
      const auto plan = adaptive_plan(a, n);
      double bound = static_cast<double>(a) + 1.0;
      const std::int64_t s_max = band_count(a, n);
      for (std::int64_t s = 2; s <= s_max; ++s) {
        const double hi = std::pow(static_cast<double>(a), static_cast<double>(s));
        const double lo = std::pow(static_cast<double>(a), static_cast<double>(s - 1));
        bound += (hi - lo) / static_cast<double>(2 * s - 1) +
                 static_cast<double>(2 * s - 1);
      }
      REQUIRE(static_cast<double>(plan.size()) <= bound);
    }
}

TEST_CASE("plan argument errors") {
  CHECK_THROWS_AS(adaptive_plan(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_plan(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_plan(4, -1), std::invalid_argument);
  const auto plan = adaptive_plan(4, 0);
  REQUIRE(plan.size() == 1);
  CHECK(plan[0].lag == 0);
}
