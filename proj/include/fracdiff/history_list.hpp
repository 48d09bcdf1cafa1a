#pragma once

#include <cstdint>
#include <list>
#include <stdexcept>
#include <string>

#include "fracdiff/grid.hpp"

namespace fracdiff {

/// One retained past timestep: its original index, its power-of-two weight,
/// and the stencil field of that step.
struct HistoryNode {
  std::int64_t step = 0;
  std::int64_t weight = 1;
  LapField lap;
};

/// Condensing history of the linked-list scheme.
///
/// Nodes are kept in ascending step order with non-increasing weights. After
/// every append, any weight category holding more than eta nodes is condensed:
/// the oldest node of the category doubles its weight and the second-oldest
/// is deleted permanently (its field memory is freed). Categories are
/// processed from the smallest weight upward since a doubling can overflow
/// the next category. Under this rule the node weights always sum to n + 1
/// and the list length stays within eta * (log2((n+1)/eta + 1) + 1).
class HistoryList {
 public:
  explicit HistoryList(std::int64_t eta) : eta_(eta) {
    if (eta < 1) throw std::invalid_argument("HistoryList: eta must be >= 1");
  }

  std::int64_t eta() const { return eta_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::list<HistoryNode>& nodes() const { return nodes_; }

  /// Appends the next timestep (weight 1) and restores the per-category
  /// count invariant by cascading condensation.
  void append(std::int64_t step, LapField lap) {
    if (!nodes_.empty() && step != nodes_.back().step + 1)
      throw std::logic_error("HistoryList: out-of-order append");
    if (nodes_.empty() && step != 0)
      throw std::logic_error("HistoryList: first append must be step 0");
    nodes_.push_back(HistoryNode{step, 1, std::move(lap)});
    condense();
  }

  /// Walks every invariant; throws with a description on the first breach.
  /// `n` is the newest appended step.
  void check_invariants(std::int64_t n) const {
    if (nodes_.empty()) throw std::logic_error("history list is empty");
    std::int64_t prev_step = -1;
    std::int64_t prev_weight = INT64_MAX;
    std::int64_t weight_sum = 0;
    std::int64_t cat_weight = 0, cat_count = 0;
    for (const HistoryNode& nd : nodes_) {
      if (nd.step <= prev_step)
        throw std::logic_error("node steps not strictly increasing");
      if (nd.weight > prev_weight)
        throw std::logic_error("weights increase with step index");
      if (nd.weight < 1 || (nd.weight & (nd.weight - 1)) != 0)
        throw std::logic_error("weight is not a power of two");
      if (nd.weight != cat_weight) {
        cat_weight = nd.weight;
        cat_count = 0;
      }
      if (++cat_count > eta_)
        throw std::logic_error("weight category exceeds eta");
      weight_sum += nd.weight;
      prev_step = nd.step;
      prev_weight = nd.weight;
    }
    if (nodes_.back().step != n)
      throw std::logic_error("newest node is not step n");
    if (nodes_.back().weight != 1)
      throw std::logic_error("newest node weight is not 1");
    if (weight_sum != n + 1)
      throw std::logic_error("weights sum to " + std::to_string(weight_sum) +
                             ", expected " + std::to_string(n + 1));
    const double bound =
        static_cast<double>(eta_) *
        (std::log2(static_cast<double>(n + 1) / static_cast<double>(eta_) + 1.0) + 1.0);
    if (static_cast<double>(nodes_.size()) > bound)
      throw std::logic_error("node count exceeds the log2 length bound");
  }

 private:
  void condense() {
    // Weights are non-increasing along the list, so each category is one
    // contiguous run; scan runs from the tail (smallest weight) backwards.
    bool changed = true;
    while (changed) {
      changed = false;
      auto run_end = nodes_.end();
      while (run_end != nodes_.begin()) {
        auto it = run_end;
        --it;
        const std::int64_t w = it->weight;
        auto run_begin = it;
        std::int64_t count = 1;
        while (run_begin != nodes_.begin()) {
          auto prev = run_begin;
          --prev;
          if (prev->weight != w) break;
          run_begin = prev;
          ++count;
        }
        if (count > eta_) {
          auto second = run_begin;
          ++second;
          run_begin->weight = 2 * w;  // oldest of the category
          nodes_.erase(second);       // second-oldest goes away for good
          changed = true;
          break;  // rescan: the doubling may overflow category 2w
        }
        run_end = run_begin;
      }
    }
  }

  std::int64_t eta_;
  std::list<HistoryNode> nodes_;
};

}  // namespace fracdiff
