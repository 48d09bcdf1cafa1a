#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdiff/config.hpp"
#include "fracdiff/solver_adaptive.hpp"
#include "fracdiff/solver_full.hpp"
#include "fracdiff/solver_linked.hpp"
#include "fracdiff/stability.hpp"

namespace fracdiff {

/// One per-step diagnostics row. The error columns carry values only in
/// comparison mode (NaN marks "not present" and is written as an empty CSV
/// cell).
struct ReportRow {
  std::int64_t step = 0;
  double sim_time = 0.0;
  double max_abs_u = 0.0;
  double max_err_pct = std::numeric_limits<double>::quiet_NaN();
  double avg_err_pct = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t op_count = 0;
  std::uint64_t wall_ns = 0;
};

enum class DivergedWho { None, Reference, Test };

struct RunResult {
  std::vector<ReportRow> rows;
  bool diverged = false;
  std::int64_t diverged_step = -1;
  DivergedWho who = DivergedWho::None;
  bool comparison = false;
  std::uint64_t total_ops = 0;
  Field2D final_field;
  double initial_max_abs = 0.0;
};

/// Percent errors of a test field against a reference field, interior only.
/// Differences are normalized by the reference's current interior max |u|
/// (not pointwise, which would blow up on near-zero tails):
///   max_err_pct = 100 * max|u_t - u_r| / max|u_r|
///   avg_err_pct = 100 * mean|u_t - u_r| / max|u_r|
struct ErrorPair {
  double max_err_pct = 0.0;
  double avg_err_pct = 0.0;
};

inline ErrorPair error_metrics(const Field2D& test, const Field2D& ref) {
  if (test.nx != ref.nx || test.ny != ref.ny)
    throw std::invalid_argument("error_metrics: shape mismatch");
  double max_d = 0.0, sum_d = 0.0, norm = 0.0;
  std::int64_t count = 0;
  for (int j = 1; j < ref.nx - 1; ++j)
    for (int l = 1; l < ref.ny - 1; ++l) {
      const double d = std::fabs(test.at(j, l) - ref.at(j, l));
      if (d > max_d) max_d = d;
      sum_d += d;
      const double r = std::fabs(ref.at(j, l));
      if (r > norm) norm = r;
      ++count;
    }
  ErrorPair e;
  if (norm == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    e.max_err_pct = max_d == 0.0 ? 0.0 : inf;
    e.avg_err_pct = sum_d == 0.0 ? 0.0 : inf;
    return e;
  }
  e.max_err_pct = 100.0 * max_d / norm;
  e.avg_err_pct = 100.0 * sum_d / (static_cast<double>(count) * norm);
  return e;
}

/// The normalization conventions above, as data, so a run manifest records
/// exactly which formulas produced its error columns.
inline nlohmann::json error_metric_defs() {
  nlohmann::json j;
  j["max_err_pct"] = "100 * max_interior|u_test - u_ref| / max_interior|u_ref|";
  j["avg_err_pct"] = "100 * mean_interior|u_test - u_ref| / max_interior|u_ref|";
  j["normalization"] =
      "reference field's current interior max |u|, not pointwise";
  return j;
}

namespace detail {

template <class Solver>
concept HasHistoryList = requires(const Solver& s) {
  { s.history().nodes() };
};

inline std::uint64_t elapsed_ns(std::chrono::steady_clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now() - t0)
          .count());
}

inline bool wants_snapshot(const SimConfig& cfg, std::int64_t step) {
  if (cfg.snapshot_steps.empty()) return step == cfg.n_steps;
  for (std::int64_t s : cfg.snapshot_steps)
    if (s == step) return true;
  return false;
}

inline std::string snapshot_path(const std::string& outdir, std::int64_t step) {
  return outdir + "/snap_" + std::to_string(step) + ".csv";
}

template <class Solver>
void dump_ll_trace(std::ofstream& out, const Solver& solver) {
  if constexpr (HasHistoryList<Solver>) {
    out << solver.t_index() << "," << solver.history().size() << ",\"";
    bool first = true;
    for (const auto& nd : solver.history().nodes()) {
      out << (first ? "" : " ") << nd.step;
      first = false;
    }
    out << "\",\"";
    first = true;
    for (const auto& nd : solver.history().nodes()) {
      out << (first ? "" : " ") << nd.weight;
      first = false;
    }
    out << "\"\n";
  }
}

}  // namespace detail

/// Drives one solver for cfg.n_steps steps from the IC, recording per-step
/// diagnostics, writing requested snapshots (when outdir is non-empty), and
/// halting on the divergence signal.
template <class Solver>
RunResult run_sim(Solver& solver, const std::string& outdir = {}) {
  const SimConfig& cfg = solver.config();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  res.initial_max_abs = solver.initial_max_abs();

  std::ofstream trace;
  const bool tracing = cfg.ll_trace && !outdir.empty() &&
                       detail::HasHistoryList<Solver>;
  if (tracing) {
    trace.open(outdir + "/ll_trace.csv");
    trace << "step,node_count,node_steps,node_weights\n";
    detail::dump_ll_trace(trace, solver);
  }

  auto record = [&] {
    ReportRow row;
    row.step = solver.t_index();
    row.sim_time = static_cast<double>(row.step) * cfg.dt;
    row.max_abs_u = solver.field().max_abs();
    row.op_count = solver.op_count();
    row.wall_ns = detail::elapsed_ns(t0);
    res.rows.push_back(row);
  };

  record();
  if (!outdir.empty() && detail::wants_snapshot(cfg, 0))
    write_snapshot_csv(solver.field(), detail::snapshot_path(outdir, 0));

  for (std::int64_t s = 1; s <= cfg.n_steps; ++s) {
    const bool ok = solver.step();
    record();
    if (!ok) {
      res.diverged = true;
      res.diverged_step = solver.diverged_step();
      res.who = DivergedWho::Test;
      break;
    }
    if (tracing) detail::dump_ll_trace(trace, solver);
    if (!outdir.empty() && detail::wants_snapshot(cfg, s))
      write_snapshot_csv(solver.field(), detail::snapshot_path(outdir, s));
  }
  res.total_ops = solver.op_count();
  res.final_field = solver.field();
  return res;
}

/// Builds the scheme's solver and runs it.
inline RunResult run_config(const SimConfig& cfg, const std::string& outdir = {}) {
  cfg.validate();
  auto kernel = MemoryKernel::shared(
      cfg.gamma, static_cast<std::size_t>(cfg.n_steps) + 1);
  switch (cfg.scheme) {
    case Scheme::Full: {
      FullSolver s(cfg, kernel);
      return run_sim(s, outdir);
    }
    case Scheme::Adaptive: {
      AdaptiveSolver s(cfg, kernel);
      return run_sim(s, outdir);
    }
    case Scheme::Linked: {
      LinkedSolver s(cfg, kernel);
      return run_sim(s, outdir);
    }
  }
  throw std::invalid_argument("run_config: unknown scheme");
}

namespace detail {

template <class TestSolver>
RunResult compare_impl(const SimConfig& cfg, const std::string& outdir) {
  SimConfig ref_cfg = cfg;
  ref_cfg.scheme = Scheme::Full;
  auto kernel = MemoryKernel::shared(
      cfg.gamma, static_cast<std::size_t>(cfg.n_steps) + 1);
  FullSolver ref(ref_cfg, kernel);
  TestSolver test(cfg, kernel);

  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  res.comparison = true;
  res.initial_max_abs = test.initial_max_abs();

  auto record = [&] {
    ReportRow row;
    row.step = test.t_index();
    row.sim_time = static_cast<double>(row.step) * cfg.dt;
    row.max_abs_u = test.field().max_abs();
    const ErrorPair e = error_metrics(test.field(), ref.field());
    row.max_err_pct = e.max_err_pct;
    row.avg_err_pct = e.avg_err_pct;
    row.op_count = test.op_count();
    row.wall_ns = detail::elapsed_ns(t0);
    res.rows.push_back(row);
  };

  record();
  if (!outdir.empty() && wants_snapshot(cfg, 0))
    write_snapshot_csv(test.field(), snapshot_path(outdir, 0));

  for (std::int64_t s = 1; s <= cfg.n_steps; ++s) {
    const bool ok_ref = ref.step();
    const bool ok_test = test.step();
    record();
    if (!ok_ref || !ok_test) {
      res.diverged = true;
      res.who = ok_ref ? DivergedWho::Test : DivergedWho::Reference;
      res.diverged_step = ok_ref ? test.diverged_step() : ref.diverged_step();
      break;
    }
    if (!outdir.empty() && wants_snapshot(cfg, s))
      write_snapshot_csv(test.field(), snapshot_path(outdir, s));
  }
  res.total_ops = test.op_count();
  res.final_field = test.field();
  return res;
}

}  // namespace detail

/// Lockstep accuracy comparison of a scheme against the full-history
/// reference on an identical configuration. Per-step error columns follow
/// error_metrics(); max_abs_u and op_count are the test solver's. A
/// reference divergence aborts the comparison with the verdict recorded.
inline RunResult compare_runs(const SimConfig& cfg, Scheme scheme_under_test,
                              const std::string& outdir = {}) {
  SimConfig test_cfg = cfg;
  test_cfg.scheme = scheme_under_test;
  test_cfg.validate();
  switch (scheme_under_test) {
    case Scheme::Full:
      return detail::compare_impl<FullSolver>(test_cfg, outdir);
    case Scheme::Adaptive:
      return detail::compare_impl<AdaptiveSolver>(test_cfg, outdir);
    case Scheme::Linked:
      return detail::compare_impl<LinkedSolver>(test_cfg, outdir);
  }
  throw std::invalid_argument("compare_runs: unknown scheme");
}

/// One scaling measurement: a run over the loop n = 0..n_last (n_last + 1
/// update steps, matching the instruction-count convention under which the
/// full scheme's total is exactly N_interior * (N+1)(N+2)/2).
struct BenchRow {
  std::int64_t n_last = 0;
  std::uint64_t op_count = 0;
  std::uint64_t wall_ns = 0;
};

inline std::vector<BenchRow> bench(Scheme scheme,
                                   std::span<const std::int64_t> n_list,
                                   const SimConfig& tmpl) {
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("bench: step counts must be ascending");
  std::vector<BenchRow> out;
  out.reserve(n_list.size());
  for (std::int64_t n : n_list) {
    if (n < 0) throw std::invalid_argument("bench: step count must be >= 0");
    SimConfig cfg = tmpl;
    cfg.scheme = scheme;
    cfg.n_steps = n + 1;
    cfg.snapshot_steps.clear();
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_config(cfg);
    BenchRow row;
    row.n_last = n;
    row.op_count = r.total_ops;
    row.wall_ns = detail::elapsed_ns(t0);
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// File outputs
// ---------------------------------------------------------------------------

/// report.csv: one row per recorded step. Error cells are empty outside
/// comparison mode.
inline void write_report_csv(const RunResult& res, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
  out << "step,sim_time,max_abs_u,max_err_pct,avg_err_pct,op_count,wall_ns\n";
  char buf[512];
  for (const ReportRow& r : res.rows) {
    std::string max_err, avg_err;
    if (res.comparison && std::isfinite(r.max_err_pct)) {
      std::snprintf(buf, sizeof(buf), "%.12g", r.max_err_pct);
      max_err = buf;
    }
    if (res.comparison && std::isfinite(r.avg_err_pct)) {
      std::snprintf(buf, sizeof(buf), "%.12g", r.avg_err_pct);
      avg_err = buf;
    }
    std::snprintf(buf, sizeof(buf), "%lld,%.12g,%.12g,%s,%s,%llu,%llu\n",
                  static_cast<long long>(r.step), r.sim_time, r.max_abs_u,
                  max_err.c_str(), avg_err.c_str(),
                  static_cast<unsigned long long>(r.op_count),
                  static_cast<unsigned long long>(r.wall_ns));
    out << buf;
  }
}

/// bench.csv: N,op_count,wall_ns per row.
inline void write_bench_csv(const std::vector<BenchRow>& rows,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_bench_csv: cannot open " + path);
  out << "N,op_count,wall_ns\n";
  for (const BenchRow& r : rows)
    out << r.n_last << "," << r.op_count << "," << r.wall_ns << "\n";
}

/// Machine-readable record of a run: the exact config (re-parseable), every
/// behavioral knob that is a documented choice rather than a parameter, and
/// the outcome.
inline nlohmann::json build_manifest(const SimConfig& cfg,
                                     const RunResult& res) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["knobs"]["divergence_threshold_factor"] = kDivergenceFactor;
  j["knobs"]["boundary"] = "constant Dirichlet ring, reapplied every step";
  j["knobs"]["a_interpretation"] =
      "timestep count applied to the summation lag; a_as_time divides by dt";
  j["knobs"]["xi_eval_step_default"] = kDefaultXiEvalStep;
  j["error_metrics"] = error_metric_defs();
  j["outcome"]["status"] = res.diverged ? "diverged" : "completed";
  if (res.diverged) {
    j["outcome"]["diverged_step"] = res.diverged_step;
    j["outcome"]["diverged_run"] =
        res.who == DivergedWho::Reference ? "reference" : "test";
  }
  j["outcome"]["steps_completed"] =
      res.rows.empty() ? 0 : res.rows.back().step;
  j["outcome"]["initial_max_abs_u"] = res.initial_max_abs;
  j["outcome"]["final_max_abs_u"] =
      res.rows.empty() ? 0.0 : res.rows.back().max_abs_u;
  j["outcome"]["op_count"] = res.total_ops;
  j["outcome"]["comparison"] = res.comparison;
  return j;
}

inline void write_manifest(const nlohmann::json& manifest,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << manifest.dump(2) << "\n";
}

}  // namespace fracdiff
