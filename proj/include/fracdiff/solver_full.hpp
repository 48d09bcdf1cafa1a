#pragma once

#include "fracdiff/solver_common.hpp"

namespace fracdiff {

/// Full-history FTCS stepper: every step convolves the entire stored
/// stencil history with the memory function,
///   u^{n+1} = u^n + dt^gamma * sum_{m=0}^{n} psi(gamma, m) L^{n-m}.
///
/// History holds one combined stencil field per completed timestep, so
/// memory grows as O(n * grid) and the cumulative op count after the loop
/// n = 0..N is N_interior * (N+1)(N+2)/2.
class FullSolver : public SolverCore {
 public:
  FullSolver(const SimConfig& cfg, std::shared_ptr<const MemoryKernel> kernel)
      : SolverCore(cfg, std::move(kernel)) {
    history_.push_back(laplacian(u_, cfg_.alpha, cfg_.beta));
  }

  const std::vector<LapField>& history() const { return history_; }

  /// Advances one timestep. Returns false when the divergence detector
  /// tripped (the run halts; the offending state is kept for reporting).
  bool step() {
    if (diverged_) return false;
    const std::int64_t n = t_;
    require_kernel_covers(n);
    clear_acc();
    for_rows([&](int jb, int je) {
      for (std::int64_t m = 0; m <= n; ++m)
        axpy((*kernel_)[static_cast<std::size_t>(m)],
             history_[static_cast<std::size_t>(n - m)], jb, je);
    });
    ops_ += static_cast<std::uint64_t>(interior_points()) *
            static_cast<std::uint64_t>(n + 1);
    const bool ok = commit_update();
    history_.push_back(laplacian(u_, cfg_.alpha, cfg_.beta));
    return ok;
  }

 private:
  std::vector<LapField> history_;  // L^0 .. L^{t_index}
};

}  // namespace fracdiff
