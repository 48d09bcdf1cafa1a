#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "fracdiff/config.hpp"
#include "fracdiff/kernel.hpp"

namespace fracdiff {

/// Default timestep at which the condensed sum Xi is evaluated inside the
/// adaptive bound; the dependence on this choice is weak.
constexpr std::int64_t kDefaultXiEvalStep = 500;

/// Outcome of the stability classification.
///
/// For a square grid with equal diffusion coefficients, `r` is the scalar
/// mesh ratio alpha dt^gamma / delta^2 and `bound` the matching B value.
/// Otherwise `r` is the general worst-case (sin^2 = 1) left-hand side
/// dt^gamma (4 alpha / dx^2 + 4 beta / dy^2) and `bound` the comparable
/// 2 / Xi form (which is 8 B).
struct StabilityVerdict {
  double r = 0.0;
  double bound = 0.0;
  bool stable = false;
  double margin = 0.0;   // bound - r
  double dt_max = 0.0;   // time step at which r(dt) meets the bound
  bool square_form = true;
};

inline bool uses_square_form(const SimConfig& cfg) {
  return cfg.dx == cfg.dy && cfg.alpha == cfg.beta;
}

/// Dimensionless stability ratio of a configuration; see StabilityVerdict
/// for the two forms.
inline double mesh_ratio(const SimConfig& cfg) {
  const double dtg = std::pow(cfg.dt, cfg.gamma);
  if (uses_square_form(cfg)) return cfg.alpha * dtg / (cfg.dx * cfg.dx);
  return dtg * (4.0 * cfg.alpha / (cfg.dx * cfg.dx) +
                4.0 * cfg.beta / (cfg.dy * cfg.dy));
}

/// B value applicable to a scheme: 2^(gamma-3) for the full stepper,
/// 1/(4 Xi) (or the base-interval approximation) for the adaptive one.
/// The linked-list scheme has no established bound.
inline double scheme_bound(const SimConfig& cfg, Scheme scheme,
                           bool use_approx,
                           std::int64_t xi_eval_step = kDefaultXiEvalStep) {
  switch (scheme) {
    case Scheme::Full:
      return b_full(cfg.gamma);
    case Scheme::Adaptive:
      return b_adap(cfg.gamma, cfg.effective_a(), xi_eval_step, use_approx);
    case Scheme::Linked:
      break;
  }
  throw std::invalid_argument(
      "scheme_bound: no stability bound is defined for the linked scheme");
}

/// Largest admissible time step: (B delta^2 / alpha)^(1/gamma) on a square
/// grid, and the analogous general worst-case form otherwise.
inline double max_stable_dt(const SimConfig& cfg, Scheme scheme,
                            bool use_approx,
                            std::int64_t xi_eval_step = kDefaultXiEvalStep) {
  const double b = scheme_bound(cfg, scheme, use_approx, xi_eval_step);
  if (uses_square_form(cfg))
    return std::pow(b * cfg.dx * cfg.dx / cfg.alpha, 1.0 / cfg.gamma);
  const double lhs_coeff = 4.0 * cfg.alpha / (cfg.dx * cfg.dx) +
                           4.0 * cfg.beta / (cfg.dy * cfg.dy);
  return std::pow(8.0 * b / lhs_coeff, 1.0 / cfg.gamma);
}

inline StabilityVerdict classify(const SimConfig& cfg, Scheme scheme,
                                 bool use_approx = false,
                                 std::int64_t xi_eval_step = kDefaultXiEvalStep) {
  StabilityVerdict v;
  v.square_form = uses_square_form(cfg);
  const double b = scheme_bound(cfg, scheme, use_approx, xi_eval_step);
  v.r = mesh_ratio(cfg);
  v.bound = v.square_form ? b : 8.0 * b;
  v.stable = v.r <= v.bound;
  v.margin = v.bound - v.r;
  v.dt_max = max_stable_dt(cfg, scheme, use_approx, xi_eval_step);
  return v;
}

inline StabilityVerdict classify(const SimConfig& cfg, bool use_approx = false,
                                 std::int64_t xi_eval_step = kDefaultXiEvalStep) {
  return classify(cfg, cfg.scheme, use_approx, xi_eval_step);
}

}  // namespace fracdiff
