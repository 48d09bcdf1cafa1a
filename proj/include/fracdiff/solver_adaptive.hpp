#pragma once

#include "fracdiff/adaptive_plan.hpp"
#include "fracdiff/solver_common.hpp"

namespace fracdiff {

/// Adaptive-memory stepper: the most recent `a` timesteps are sampled at
/// full resolution, older history sparsely with compensating integer
/// weights,
///   u^{n+1} = u^n + dt^gamma * sum_{(m,w) in plan(a,n)} w psi(gamma,m) L^{n-m}.
///
/// The sampling plan is grid-independent, so it is derived once per step
/// and shared by all interior points. For n <= a the plan degenerates to
/// the full scheme's, so early steps (and whole runs with a >= N) coincide
/// with FullSolver exactly.
class AdaptiveSolver : public SolverCore {
 public:
  AdaptiveSolver(const SimConfig& cfg,
                 std::shared_ptr<const MemoryKernel> kernel)
      : SolverCore(cfg, std::move(kernel)), a_(cfg_.effective_a()) {
    if (a_ < 2)
      throw std::invalid_argument("AdaptiveSolver: base interval a must be >= 2");
    history_.push_back(laplacian(u_, cfg_.alpha, cfg_.beta));
  }

  std::int64_t base_interval() const { return a_; }
  const std::vector<LapField>& history() const { return history_; }

  bool step() {
    if (diverged_) return false;
    const std::int64_t n = t_;
    require_kernel_covers(n);
    const std::vector<PlanEntry> plan = adaptive_plan(a_, n);
    clear_acc();
    for_rows([&](int jb, int je) {
      for (const PlanEntry& e : plan)
        axpy(static_cast<double>(e.weight) *
                 (*kernel_)[static_cast<std::size_t>(e.lag)],
             history_[static_cast<std::size_t>(n - e.lag)], jb, je);
    });
    ops_ += static_cast<std::uint64_t>(interior_points()) *
            static_cast<std::uint64_t>(plan.size());
    const bool ok = commit_update();
    history_.push_back(laplacian(u_, cfg_.alpha, cfg_.beta));
    return ok;
  }

 private:
  std::int64_t a_;
  std::vector<LapField> history_;  // L^0 .. L^{t_index}
};

}  // namespace fracdiff
