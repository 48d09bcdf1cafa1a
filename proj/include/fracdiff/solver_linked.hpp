#pragma once

#include "fracdiff/history_list.hpp"
#include "fracdiff/solver_common.hpp"

namespace fracdiff {

/// Linked-list history-condensation stepper,
///   u^{n+1} = u^n + dt^gamma * sum_{nodes} psi(gamma, n - i) w_i L^i.
///
/// Past timesteps live in a condensing list with power-of-two weights;
/// condensation deletes nodes permanently, so peak memory follows the
/// list-length bound eta * (log2((n+1)/eta + 1) + 1) instead of O(n).
class LinkedSolver : public SolverCore {
 public:
  LinkedSolver(const SimConfig& cfg, std::shared_ptr<const MemoryKernel> kernel)
      : SolverCore(cfg, std::move(kernel)), list_(cfg_.eta) {
    list_.append(0, laplacian(u_, cfg_.alpha, cfg_.beta));
  }

  const HistoryList& history() const { return list_; }

  bool step() {
    if (diverged_) return false;
    const std::int64_t n = t_;
    require_kernel_covers(n);
    ops_ += static_cast<std::uint64_t>(interior_points()) *
            static_cast<std::uint64_t>(list_.size());
    clear_acc();
    // Newest node first, so lags ascend and the accumulation order matches
    // the full solver's whenever no condensation has happened yet.
    for_rows([&](int jb, int je) {
      const auto& nodes = list_.nodes();
      for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
        axpy(static_cast<double>(it->weight) *
                 (*kernel_)[static_cast<std::size_t>(n - it->step)],
             it->lap, jb, je);
    });
    const bool ok = commit_update();
    list_.append(t_, laplacian(u_, cfg_.alpha, cfg_.beta));
    return ok;
  }

 private:
  HistoryList list_;
};

}  // namespace fracdiff
