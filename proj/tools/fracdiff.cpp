// Command-line front end: parse a config, dispatch a subcommand, write
// artifacts (manifest.json, report.csv, snapshots, bench.csv).
//
// Exit codes: 0 bounded completion, 1 usage/config error, 2 divergence.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracdiff/harness.hpp"

#ifndef FRACDIFF_PRESET_DIR
#define FRACDIFF_PRESET_DIR ""
#endif

namespace {

using namespace fracdiff;

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FRACDIFF_OUT"); env && *env) return env;
  return ".";
}

std::string preset_path(const std::string& name) {
  std::string dir = FRACDIFF_PRESET_DIR;
  if (const char* env = std::getenv("FRACDIFF_PRESET_DIR"); env && *env)
    dir = env;
  if (dir.empty())
    throw ConfigError(0, "no preset directory configured; use --config");
  return dir + "/" + name + ".cfg";
}

SimConfig load_config(const std::string& config_flag,
                      const std::string& preset_flag, int threads_flag) {
  if (config_flag.empty() == preset_flag.empty())
    throw ConfigError(0, "exactly one of --config or --preset is required");
  SimConfig cfg = config_flag.empty()
                      ? parse_config_file(preset_path(preset_flag))
                      : parse_config_file(config_flag);
  if (threads_flag > 0) cfg.threads = threads_flag;
  cfg.validate();
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory: " + dir + ": " +
                             ec.message());
}

nlohmann::json verdict_json(const SimConfig& cfg, Scheme scheme,
                            bool use_approx, std::int64_t xi_step) {
  const StabilityVerdict v = classify(cfg, scheme, use_approx, xi_step);
  nlohmann::json j;
  j["gamma"] = cfg.gamma;
  j["scheme"] = to_string(scheme);
  if (scheme == Scheme::Adaptive) {
    j["a"] = cfg.effective_a();
    j["xi_eval_step"] = xi_step;
    j["use_approx"] = use_approx;
  }
  j["r"] = v.r;
  j["bound"] = v.bound;
  j["stable"] = v.stable;
  j["margin"] = v.margin;
  j["dt_max"] = v.dt_max;
  j["square_form"] = v.square_form;
  return j;
}

int finish_run(const SimConfig& cfg, const RunResult& res,
               const std::string& outdir) {
  nlohmann::json manifest = build_manifest(cfg, res);
  manifest["derived"]["mesh_ratio"] = mesh_ratio(cfg);
  if (cfg.scheme != Scheme::Linked) {
    const StabilityVerdict v = classify(cfg, cfg.scheme, false);
    manifest["derived"]["scheme_bound"] = v.bound;
    manifest["derived"]["classified_stable"] = v.stable;
  }
  write_manifest(manifest, outdir + "/manifest.json");
  write_report_csv(res, outdir + "/report.csv");
  if (res.diverged) {
    std::fprintf(stderr, "divergence detected at step %lld (see manifest)\n",
                 static_cast<long long>(res.diverged_step));
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D time-fractional diffusion solver toolkit"};
  app.require_subcommand(1);

  std::string config_flag, preset_flag, out_flag, scheme_flag, steps_flag;
  int threads_flag = 0;
  bool approx_flag = false, json_flag = false;
  std::int64_t xi_step = fracdiff::kDefaultXiEvalStep;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_flag, "path to a key = value config file");
    cmd->add_option("--preset", preset_flag, "name of a shipped preset");
    cmd->add_option("--out", out_flag,
                    "output directory (default: $FRACDIFF_OUT or '.')");
    cmd->add_option("--threads", threads_flag, "row-parallel worker count");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one scheme from the IC");
  add_common(sim);

  CLI::App* stab = app.add_subcommand(
      "stability", "classify a configuration against the scheme bound");
  add_common(stab);
  stab->add_option("--scheme", scheme_flag, "full or adaptive (default: config)");
  stab->add_flag("--approx", approx_flag,
                 "use the base-interval sum instead of the condensed sum");
  stab->add_option("--xi-step", xi_step,
                   "timestep at which the condensed sum is evaluated");
  stab->add_flag("--json", json_flag, "print the JSON verdict to stdout");

  CLI::App* cmp = app.add_subcommand(
      "compare", "lockstep accuracy comparison against the full scheme");
  add_common(cmp);
  cmp->add_option("--scheme", scheme_flag,
                  "scheme under test (default: config scheme)");

  CLI::App* ben = app.add_subcommand("bench", "op-count / wall-time scaling");
  add_common(ben);
  ben->add_option("--scheme", scheme_flag, "full, adaptive, or linked")
      ->required();
  ben->add_option("--steps", steps_flag, "comma-separated ascending step counts")
      ->required();

  CLI11_PARSE(app, argc, argv);

  using namespace fracdiff;
  try {
    const std::string outdir = resolve_out_dir(out_flag);

    if (sim->parsed()) {
      const SimConfig cfg = load_config(config_flag, preset_flag, threads_flag);
      ensure_dir(outdir);
      const RunResult res = run_config(cfg, outdir);
      return finish_run(cfg, res, outdir);
    }

    if (stab->parsed()) {
      const SimConfig cfg = load_config(config_flag, preset_flag, threads_flag);
      Scheme scheme = cfg.scheme;
      if (!scheme_flag.empty()) {
        if (scheme_flag == "full") scheme = Scheme::Full;
        else if (scheme_flag == "adaptive") scheme = Scheme::Adaptive;
        else throw ConfigError(0, "stability bounds are defined for the full and adaptive schemes");
      } else if (scheme == Scheme::Linked) {
        throw ConfigError(0,
                          "stability bounds are defined for the full and "
                          "adaptive schemes; pass --scheme");
      }
      const nlohmann::json j = verdict_json(cfg, scheme, approx_flag, xi_step);
      std::printf("scheme  : %s\n", to_string(scheme));
      std::printf("r       : %.6g\n", j["r"].get<double>());
      std::printf("bound   : %.6g\n", j["bound"].get<double>());
      std::printf("stable  : %s\n", j["stable"].get<bool>() ? "yes" : "no");
      std::printf("margin  : %.6g\n", j["margin"].get<double>());
      std::printf("dt_max  : %.6g\n", j["dt_max"].get<double>());
      ensure_dir(outdir);
      write_manifest(j, outdir + "/stability.json");
      if (json_flag) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (cmp->parsed()) {
      SimConfig cfg = load_config(config_flag, preset_flag, threads_flag);
      if (!scheme_flag.empty()) {
        if (scheme_flag == "full") cfg.scheme = Scheme::Full;
        else if (scheme_flag == "adaptive") cfg.scheme = Scheme::Adaptive;
        else if (scheme_flag == "linked") cfg.scheme = Scheme::Linked;
        else throw ConfigError(0, "unknown scheme '" + scheme_flag + "'");
        cfg.validate();
      }
      ensure_dir(outdir);
      const RunResult res = compare_runs(cfg, cfg.scheme, outdir);
      return finish_run(cfg, res, outdir);
    }

    if (ben->parsed()) {
      SimConfig tmpl;
      if (!config_flag.empty() || !preset_flag.empty()) {
        tmpl = load_config(config_flag, preset_flag, threads_flag);
      } else {
        // degenerate 1x1-interior grid; per-interior-point counts are
        // grid-independent
        tmpl.nx = tmpl.ny = 3;
        tmpl.gamma = 0.8;
        tmpl.alpha = tmpl.beta = 1.0;
        tmpl.dx = tmpl.dy = 1.0;
        tmpl.dt = 0.05;
        tmpl.a = 20;
        tmpl.eta = 20;
      }
      Scheme scheme;
      if (scheme_flag == "full") scheme = Scheme::Full;
      else if (scheme_flag == "adaptive") scheme = Scheme::Adaptive;
      else if (scheme_flag == "linked") scheme = Scheme::Linked;
      else throw ConfigError(0, "unknown scheme '" + scheme_flag + "'");
      std::vector<std::int64_t> n_list;
      std::istringstream ss(steps_flag);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) n_list.push_back(std::stoll(tok));
      if (n_list.empty()) throw ConfigError(0, "--steps must list step counts");
      const std::vector<BenchRow> rows = bench(scheme, n_list, tmpl);
      ensure_dir(outdir);
      write_bench_csv(rows, outdir + "/bench.csv");
      for (const BenchRow& r : rows)
        std::printf("N=%lld op_count=%llu wall_ns=%llu\n",
                    static_cast<long long>(r.n_last),
                    static_cast<unsigned long long>(r.op_count),
                    static_cast<unsigned long long>(r.wall_ns));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
