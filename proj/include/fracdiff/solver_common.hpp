#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fracdiff/config.hpp"
#include "fracdiff/grid.hpp"
#include "fracdiff/kernel.hpp"

namespace fracdiff {

/// A run is declared unstable when max |u| exceeds this multiple of the
/// initial max |u|, or when any non-finite value appears.
constexpr double kDivergenceFactor = 10.0;

/// State and machinery shared by the three time steppers: current field,
/// weighted-sum accumulator, divergence detection, op accounting, and the
/// optional row-parallel dispatch.
///
/// Stepping is sequential in n (hard data dependence); within a step the
/// interior update may run on several threads with the history read-only.
class SolverCore {
 public:
  const Field2D& field() const { return u_; }
  std::int64_t t_index() const { return t_; }
  std::uint64_t op_count() const { return ops_; }
  bool diverged() const { return diverged_; }
  std::int64_t diverged_step() const { return diverged_step_; }
  double initial_max_abs() const { return initial_max_abs_; }
  std::int64_t interior_points() const {
    return static_cast<std::int64_t>(u_.nx - 2) * (u_.ny - 2);
  }
  const SimConfig& config() const { return cfg_; }
  const MemoryKernel& kernel() const { return *kernel_; }

 protected:
  SolverCore(const SimConfig& cfg, std::shared_ptr<const MemoryKernel> kernel)
      : cfg_(cfg),
        kernel_(std::move(kernel)),
        u_(cfg.make_ic()),
        acc_(static_cast<std::size_t>(cfg.nx) * cfg.ny, 0.0),
        dt_gamma_(std::pow(cfg.dt, cfg.gamma)),
        initial_max_abs_(0.0) {
    cfg_.validate();
    if (!kernel_) throw std::invalid_argument("solver: null kernel");
    if (kernel_->gamma() != cfg_.gamma)
      throw std::invalid_argument("solver: kernel gamma does not match config");
    initial_max_abs_ = u_.max_abs();
  }

  void require_kernel_covers(std::int64_t lag) const {
    if (lag < 0 || static_cast<std::size_t>(lag) >= kernel_->size())
      throw std::logic_error("solver: kernel shorter than the history lag");
  }

  void clear_acc() { std::fill(acc_.begin(), acc_.end(), 0.0); }

  /// acc += c * lap over rows [jb, je). Whole rows: the zero boundary
  /// columns contribute nothing and the contiguous span vectorizes.
  void axpy(double c, const LapField& lap, int jb, int je) {
    const int ny = u_.ny;
    for (int j = jb; j < je; ++j) {
      const std::size_t off = static_cast<std::size_t>(j) * ny;
      const double* s = lap.v.data() + off;
      double* d = acc_.data() + off;
      for (int l = 0; l < ny; ++l) d[l] += c * s[l];
    }
  }

  /// Runs fn(jb, je) over the interior rows [1, nx-1), split across the
  /// configured thread count. Chunking is fixed, so results do not depend
  /// on the thread count.
  template <class Fn>
  void for_rows(Fn&& fn) {
    const int first = 1;
    const int last = u_.nx - 1;
    const int rows = last - first;
    const int nthreads = std::min<int>(cfg_.threads, rows);
    if (nthreads <= 1) {
      fn(first, last);
      return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nthreads));
    const int chunk = (rows + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const int jb = first + t * chunk;
      const int je = std::min(jb + chunk, last);
      if (jb >= je) break;
      workers.emplace_back([&fn, jb, je] { fn(jb, je); });
    }
    for (auto& w : workers) w.join();
  }

  /// u += dt^gamma * acc on the interior, boundary ring reapplied, then the
  /// divergence check. Returns false when this step tripped the detector.
  bool commit_update() {
    for (int j = 1; j < u_.nx - 1; ++j)
      for (int l = 1; l < u_.ny - 1; ++l)
        u_.at(j, l) += dt_gamma_ * acc_[static_cast<std::size_t>(j) * u_.ny + l];
    apply_bc(u_, cfg_.bc);
    ++t_;
    if (!u_.all_finite() ||
        u_.max_abs() > kDivergenceFactor * initial_max_abs_) {
      diverged_ = true;
      diverged_step_ = t_;
    }
    return !diverged_;
  }

  SimConfig cfg_;
  std::shared_ptr<const MemoryKernel> kernel_;
  Field2D u_;
  std::vector<double> acc_;
  double dt_gamma_ = 0.0;
  double initial_max_abs_ = 0.0;
  std::int64_t t_ = 0;
  std::uint64_t ops_ = 0;
  bool diverged_ = false;
  std::int64_t diverged_step_ = -1;
};

}  // namespace fracdiff
