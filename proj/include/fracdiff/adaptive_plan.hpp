#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fracdiff {

/// One history sample of the adaptive scheme: the stencil field at lag `lag`
/// enters the convolution multiplied by `weight`.
struct PlanEntry {
  std::int64_t lag = 0;
  std::int64_t weight = 1;
};

namespace detail {

/// a^s, clamped so the result never exceeds `limit` (avoids overflow when
/// bands run past the current timestep).
inline std::int64_t ipow_clamped(std::int64_t a, std::int64_t s,
                                 std::int64_t limit) {
  std::int64_t p = 1;
  for (std::int64_t i = 0; i < s; ++i) {
    if (p > limit / a) return limit + 1;
    p *= a;
  }
  return p;
}

}  // namespace detail

/// Band index s_max(n): the unique s with a^(s-1) + 1 <= n <= a^s.
/// Requires n > a (for n <= a the plan has no sparse bands).
inline std::int64_t band_count(std::int64_t a, std::int64_t n) {
  if (a < 2) throw std::invalid_argument("band_count: a must be >= 2");
  if (n <= a) return 1;
  std::int64_t s = 2;
  while (detail::ipow_clamped(a, s, n) < n) ++s;
  return s;
}

/// eta_max(s, n) = min(floor((a^s - a^(s-1)) / (2s-1)),
///                     floor((n - a^(s-1)) / (2s-1))).
inline std::int64_t band_samples(std::int64_t a, std::int64_t s,
                                 std::int64_t n) {
  const std::int64_t stride = 2 * s - 1;
  const std::int64_t lo = detail::ipow_clamped(a, s - 1, n);
  const std::int64_t hi = detail::ipow_clamped(a, s, n);
  const std::int64_t full = (hi > n) ? (n - lo) / stride : (hi - lo) / stride;
  const std::int64_t avail = (n - lo) / stride;
  return full < avail ? full : avail;
}

/// Center offset M(s, eta) = a^(s-1) + (2s-1) eta - s + 1 of the eta-th
/// weighted sample in band s.
inline std::int64_t band_offset(std::int64_t a, std::int64_t s,
                                std::int64_t eta) {
  std::int64_t p = 1;
  for (std::int64_t i = 0; i < s - 1; ++i) p *= a;
  return p + (2 * s - 1) * eta - s + 1;
}

/// History sampling plan of the adaptive scheme at timestep n.
///
/// For n <= a every lag 0..n is sampled with weight 1. Beyond the base
/// interval, band s = 2..s_max samples every (2s-1)-th lag with weight
/// (2s-1), plus an unweighted remainder run covering the lags the strided
/// samples miss (empty when the band divides evenly). Lags are emitted in
/// ascending order, are distinct, and their weights always sum to n + 1, so
/// every historical step is accounted for exactly once.
inline std::vector<PlanEntry> adaptive_plan(std::int64_t a, std::int64_t n) {
  if (a < 2) throw std::invalid_argument("adaptive_plan: a must be >= 2");
  if (n < 0) throw std::invalid_argument("adaptive_plan: n must be >= 0");
  std::vector<PlanEntry> plan;
  if (n <= a) {
    plan.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t m = 0; m <= n; ++m) plan.push_back({m, 1});
    return plan;
  }
  for (std::int64_t m = 0; m <= a; ++m) plan.push_back({m, 1});
  const std::int64_t s_max = band_count(a, n);
  for (std::int64_t s = 2; s <= s_max; ++s) {
    const std::int64_t weight = 2 * s - 1;
    const std::int64_t eta_max = band_samples(a, s, n);
    for (std::int64_t eta = 1; eta <= eta_max; ++eta)
      plan.push_back({band_offset(a, s, eta), weight});
    // Remainder run p = M(s, eta_max) + s .. min(a^s, n); empty when the
    // strided samples tile the band exactly.
    const std::int64_t hi = detail::ipow_clamped(a, s, n);
    const std::int64_t top = hi < n ? hi : n;
    for (std::int64_t p = band_offset(a, s, eta_max) + s; p <= top; ++p)
      plan.push_back({p, 1});
  }
  return plan;
}

}  // namespace fracdiff
