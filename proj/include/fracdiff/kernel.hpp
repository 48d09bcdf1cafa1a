#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracdiff/adaptive_plan.hpp"

namespace fracdiff {

/// Grunwald-Letnikov memory function psi(gamma, m) for one fractional order.
///
/// weights()[m] = (-1)^m * binom(1-gamma, m), generated by the multiplicative
/// recurrence psi(m) = psi(m-1) * (m - 2 + gamma) / m, which is exact in real
/// arithmetic (the Gamma-function form is used only as a test oracle).
///
/// Immutable after construction; safe to share across threads.
class MemoryKernel {
 public:
  MemoryKernel(double gamma, std::size_t len) : gamma_(gamma) {
    if (!(gamma > 0.0) || !(gamma < 2.0))
      throw std::domain_error("MemoryKernel: gamma must lie in (0, 2)");
    if (len == 0) throw std::invalid_argument("MemoryKernel: len must be >= 1");
    w_.resize(len);
    w_[0] = 1.0;
    for (std::size_t m = 1; m < len; ++m)
      w_[m] = w_[m - 1] * (static_cast<double>(m) - 2.0 + gamma) /
              static_cast<double>(m);
  }

  double gamma() const { return gamma_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t m) const { return w_[m]; }
  std::span<const double> weights() const { return w_; }

  /// Process-wide cache: identical weights are reused by every solver in a
  /// run, so kernels are built once per (gamma, len) and shared.
  static std::shared_ptr<const MemoryKernel> shared(double gamma,
                                                    std::size_t len) {
    if (!(gamma > 0.0) || !(gamma < 2.0))
      throw std::domain_error("MemoryKernel: gamma must lie in (0, 2)");
    static std::mutex mu;
    static std::map<std::pair<double, std::size_t>,
                    std::shared_ptr<const MemoryKernel>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(gamma, len);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto k = std::make_shared<const MemoryKernel>(gamma, len);
    cache.emplace(key, k);
    return k;
  }

 private:
  double gamma_;
  std::vector<double> w_;
};

/// Partial alternating sum S_n = sum_{m=0}^{n} psi(gamma,m) (-1)^m.
/// For 0 < gamma < 2 the full series converges to 2^(1-gamma).
inline double alternating_sum(const MemoryKernel& kernel, std::int64_t n) {
  if (n < 0 || static_cast<std::size_t>(n) >= kernel.size())
    throw std::invalid_argument("alternating_sum: n out of kernel range");
  double s = 0.0;
  for (std::int64_t m = 0; m <= n; ++m)
    s += (m % 2 == 0) ? kernel[static_cast<std::size_t>(m)]
                      : -kernel[static_cast<std::size_t>(m)];
  return s;
}

/// Limit of the alternating series, 2^(1-gamma).
inline double alternating_series_limit(double gamma) {
  return std::exp2(1.0 - gamma);
}

/// Stability bound of the full scheme, B_full(gamma) = 2^(gamma-3).
/// At gamma = 1 this recovers the classical 2D FTCS bound r <= 1/4.
inline double b_full(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 2.0))
    throw std::domain_error("b_full: gamma must lie in (0, 2)");
  return std::exp2(gamma - 3.0);
}

/// Base-interval partial sum Xi_approx = sum_{m=0}^{a} psi(gamma,m) (-1)^m.
inline double xi_approx(const MemoryKernel& kernel, std::int64_t a) {
  if (a < 1) throw std::invalid_argument("xi_approx: a must be >= 1");
  return alternating_sum(kernel, a);
}

inline double xi_approx(double gamma, std::int64_t a) {
  if (a < 1) throw std::invalid_argument("xi_approx: a must be >= 1");
  MemoryKernel kernel(gamma, static_cast<std::size_t>(a) + 1);
  return alternating_sum(kernel, a);
}

/// Condensed alternating sum Xi of the adaptive scheme at timestep n:
/// the base-interval partial sum plus the sparsely sampled, weight-compensated
/// tail. Evaluated over the same sampling plan the adaptive stepper uses, so
/// the bound and the solver always agree on the index algebra. For n <= a
/// this reduces to the plain partial sum over m = 0..n.
inline double xi(const MemoryKernel& kernel, std::int64_t a, std::int64_t n) {
  if (a < 2) throw std::invalid_argument("xi: a must be >= 2");
  if (n < 1) throw std::invalid_argument("xi: n must be >= 1");
  if (static_cast<std::size_t>(n) >= kernel.size())
    throw std::invalid_argument("xi: kernel too short for n");
  double s = 0.0;
  for (const PlanEntry& e : adaptive_plan(a, n)) {
    const double term = static_cast<double>(e.weight) *
                        kernel[static_cast<std::size_t>(e.lag)];
    s += (e.lag % 2 == 0) ? term : -term;
  }
  return s;
}

inline double xi(double gamma, std::int64_t a, std::int64_t n) {
  if (a < 2) throw std::invalid_argument("xi: a must be >= 2");
  if (n < 1) throw std::invalid_argument("xi: n must be >= 1");
  MemoryKernel kernel(gamma, static_cast<std::size_t>(n) + 1);
  return xi(kernel, a, n);
}

/// Stability bound of the adaptive scheme, B_adap = 1/(4 Xi) (or 1/(4
/// Xi_approx) when use_approx is set). Xi <= 0 signals an invalid parameter
/// combination; it cannot occur for 0 < gamma < 1.
inline double b_adap(double gamma, std::int64_t a, std::int64_t n,
                     bool use_approx) {
  const double x = use_approx ? xi_approx(gamma, a) : xi(gamma, a, n);
  if (!(x > 0.0)) throw std::range_error("b_adap: Xi is not positive");
  return 1.0 / (4.0 * x);
}

/// All stability-bound quantities for one (gamma, a, n) triple.
struct BoundSet {
  double gamma = 0.0;
  std::int64_t a = 0;
  std::int64_t n = 0;
  double b_full = 0.0;        // 2^(gamma-3)
  double xi = 0.0;            // condensed sum at step n
  double xi_approx = 0.0;     // base-interval partial sum
  double b_adap_xi = 0.0;     // 1/(4 xi)
  double b_adap_approx = 0.0; // 1/(4 xi_approx)
};

inline BoundSet compute_bounds(double gamma, std::int64_t a, std::int64_t n) {
  BoundSet b;
  b.gamma = gamma;
  b.a = a;
  b.n = n;
  b.b_full = b_full(gamma);
  MemoryKernel kernel(gamma, static_cast<std::size_t>(std::max<std::int64_t>(n, a)) + 1);
  b.xi = xi(kernel, a, n);
  b.xi_approx = xi_approx(kernel, a);
  if (!(b.xi > 0.0) || !(b.xi_approx > 0.0))
    throw std::range_error("compute_bounds: Xi is not positive");
  b.b_adap_xi = 1.0 / (4.0 * b.xi);
  b.b_adap_approx = 1.0 / (4.0 * b.xi_approx);
  return b;
}

}  // namespace fracdiff
