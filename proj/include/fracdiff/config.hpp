#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fracdiff/grid.hpp"

namespace fracdiff {

enum class Scheme { Full, Adaptive, Linked };
enum class IcKind { Gaussian, Uniform, Spike };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Full: return "full";
    case Scheme::Adaptive: return "adaptive";
    case Scheme::Linked: return "linked";
  }
  return "?";
}

inline const char* to_string(IcKind k) {
  switch (k) {
    case IcKind::Gaussian: return "gaussian";
    case IcKind::Uniform: return "uniform";
    case IcKind::Spike: return "spike";
  }
  return "?";
}

/// Parse/validation failure; `line` is 1-based, 0 when not tied to a line.
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_, const std::string& msg)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg
                                     : msg),
        line(line_) {}
};

/// Full parameter set of one simulation. Deterministic by construction:
/// there is no randomness anywhere, so identical configs give identical
/// outputs (wall-clock columns aside).
struct SimConfig {
  double gamma = 0.6;
  double alpha = 50.0;       // x diffusion coefficient, units^2 / time^gamma
  double beta = 50.0;        // y diffusion coefficient
  double dt = 0.1;           // time step
  double dx = 10.0;          // spatial steps
  double dy = 10.0;
  int nx = 20;               // grid counts, boundary ring included
  int ny = 20;
  std::int64_t n_steps = 2000;
  Scheme scheme = Scheme::Full;
  double a = 8;              // adaptive base interval (timesteps, or time
                             // units when a_as_time is set)
  bool a_as_time = false;
  std::int64_t eta = 15;     // linked-list condensation threshold
  IcKind ic = IcKind::Gaussian;
  double sigma1 = 5.0;
  double sigma2 = 5.0;
  double ic_value = 1.0;     // uniform level / spike amplitude
  BoundarySpec bc{};
  std::vector<std::int64_t> snapshot_steps;  // empty -> final step only
  int threads = 1;
  bool ll_trace = false;     // per-step linked-list dump (ll_trace.csv)

  /// Base interval as a timestep count, after the optional time-units
  /// conversion a_effective = a / dt.
  std::int64_t effective_a() const {
    return a_as_time ? static_cast<std::int64_t>(std::llround(a / dt))
                     : static_cast<std::int64_t>(std::llround(a));
  }

  void validate() const {
    auto req = [](bool ok, const char* msg) {
      if (!ok) throw ConfigError(0, msg);
    };
    req(gamma > 0.0 && gamma < 2.0, "gamma must lie in (0, 2)");
    req(alpha > 0.0, "alpha must be positive");
    req(beta > 0.0, "beta must be positive");
    req(dt > 0.0, "dt must be positive");
    req(dx > 0.0 && dy > 0.0, "dx and dy must be positive");
    req(nx >= 3 && ny >= 3, "nx and ny must be >= 3");
    req(n_steps >= 0, "n_steps must be >= 0");
    req(threads >= 1, "threads must be >= 1");
    if (ic == IcKind::Gaussian)
      req(sigma1 > 0.0 && sigma2 > 0.0, "sigma1 and sigma2 must be positive");
    if (scheme == Scheme::Adaptive)
      req(effective_a() >= 2, "adaptive scheme requires a >= 2");
    if (scheme == Scheme::Linked) req(eta >= 1, "linked scheme requires eta >= 1");
    for (std::int64_t s : snapshot_steps)
      req(s >= 0 && s <= n_steps, "snapshot step out of [0, n_steps]");
  }

  Field2D make_ic() const {
    Field2D f;
    switch (ic) {
      case IcKind::Gaussian:
        f = gaussian_ic(nx, ny, dx, dy, sigma1, sigma2);
        break;
      case IcKind::Uniform:
        f = uniform_ic(nx, ny, dx, dy, ic_value);
        break;
      case IcKind::Spike:
        f = spike_ic(nx, ny, dx, dy, ic_value);
        break;
    }
    apply_bc(f, bc);
    return f;
  }

  bool operator==(const SimConfig& o) const {
    return gamma == o.gamma && alpha == o.alpha && beta == o.beta &&
           dt == o.dt && dx == o.dx && dy == o.dy && nx == o.nx &&
           ny == o.ny && n_steps == o.n_steps && scheme == o.scheme &&
           a == o.a && a_as_time == o.a_as_time && eta == o.eta &&
           ic == o.ic && sigma1 == o.sigma1 && sigma2 == o.sigma2 &&
           ic_value == o.ic_value && bc.kind == o.bc.kind &&
           bc.value == o.bc.value && snapshot_steps == o.snapshot_steps &&
           threads == o.threads && ll_trace == o.ll_trace;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v, int line) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(line, "trailing characters after number '" + v + "'");
  return x;
}

inline std::int64_t parse_int(const std::string& v, int line) {
  std::size_t pos = 0;
  long long x;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(line, "trailing characters after integer '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "expected a boolean, got '" + v + "'");
}

}  // namespace detail

/// Parses the flat key = value config format (one pair per line, '#'
/// comments). Unknown keys and malformed lines fail with the line number.
inline SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::string line;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, "expected 'key = value'");
    const std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    const std::size_t hash = val.find('#');
    if (hash != std::string::npos) val = detail::trim(val.substr(0, hash));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    if (val.empty()) throw ConfigError(lineno, "empty value for '" + key + "'");

    if (key == "gamma") cfg.gamma = detail::parse_double(val, lineno);
    else if (key == "alpha") cfg.alpha = detail::parse_double(val, lineno);
    else if (key == "beta") cfg.beta = detail::parse_double(val, lineno);
    else if (key == "dt") cfg.dt = detail::parse_double(val, lineno);
    else if (key == "dx") cfg.dx = detail::parse_double(val, lineno);
    else if (key == "dy") cfg.dy = detail::parse_double(val, lineno);
    else if (key == "nx") cfg.nx = static_cast<int>(detail::parse_int(val, lineno));
    else if (key == "ny") cfg.ny = static_cast<int>(detail::parse_int(val, lineno));
    else if (key == "n_steps") cfg.n_steps = detail::parse_int(val, lineno);
    else if (key == "scheme") {
      if (val == "full") cfg.scheme = Scheme::Full;
      else if (val == "adaptive") cfg.scheme = Scheme::Adaptive;
      else if (val == "linked") cfg.scheme = Scheme::Linked;
      else throw ConfigError(lineno, "unknown scheme '" + val + "'");
    } else if (key == "a") cfg.a = detail::parse_double(val, lineno);
    else if (key == "a_as_time") cfg.a_as_time = detail::parse_bool(val, lineno);
    else if (key == "eta") cfg.eta = detail::parse_int(val, lineno);
    else if (key == "ic") {
      if (val == "gaussian") cfg.ic = IcKind::Gaussian;
      else if (val == "uniform") cfg.ic = IcKind::Uniform;
      else if (val == "spike") cfg.ic = IcKind::Spike;
      else throw ConfigError(lineno, "unknown ic '" + val + "'");
    } else if (key == "sigma1") cfg.sigma1 = detail::parse_double(val, lineno);
    else if (key == "sigma2") cfg.sigma2 = detail::parse_double(val, lineno);
    else if (key == "ic_value") cfg.ic_value = detail::parse_double(val, lineno);
    else if (key == "bc") {
      if (val == "dirichlet") cfg.bc.kind = BcKind::Dirichlet;
      else throw ConfigError(lineno, "unknown bc '" + val + "'");
    } else if (key == "bc_value") cfg.bc.value = detail::parse_double(val, lineno);
    else if (key == "snapshot_steps") {
      cfg.snapshot_steps.clear();
      std::istringstream vs(val);
      std::string tok;
      while (std::getline(vs, tok, ',')) {
        tok = detail::trim(tok);
        if (!tok.empty())
          cfg.snapshot_steps.push_back(detail::parse_int(tok, lineno));
      }
    } else if (key == "threads") cfg.threads = static_cast<int>(detail::parse_int(val, lineno));
    else if (key == "ll_trace") cfg.ll_trace = detail::parse_bool(val, lineno);
    else throw ConfigError(lineno, "unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

inline SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::string to_config_text(const SimConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "gamma = " << c.gamma << "\n"
      << "alpha = " << c.alpha << "\n"
      << "beta = " << c.beta << "\n"
      << "dt = " << c.dt << "\n"
      << "dx = " << c.dx << "\n"
      << "dy = " << c.dy << "\n"
      << "nx = " << c.nx << "\n"
      << "ny = " << c.ny << "\n"
      << "n_steps = " << c.n_steps << "\n"
      << "scheme = " << to_string(c.scheme) << "\n"
      << "a = " << c.a << "\n"
      << "a_as_time = " << (c.a_as_time ? "true" : "false") << "\n"
      << "eta = " << c.eta << "\n"
      << "ic = " << to_string(c.ic) << "\n"
      << "sigma1 = " << c.sigma1 << "\n"
      << "sigma2 = " << c.sigma2 << "\n"
      << "ic_value = " << c.ic_value << "\n"
      << "bc = dirichlet\n"
      << "bc_value = " << c.bc.value << "\n";
  if (!c.snapshot_steps.empty()) {
    out << "snapshot_steps = ";
    for (std::size_t i = 0; i < c.snapshot_steps.size(); ++i)
      out << c.snapshot_steps[i] << (i + 1 < c.snapshot_steps.size() ? "," : "");
    out << "\n";
  }
  out << "threads = " << c.threads << "\n"
      << "ll_trace = " << (c.ll_trace ? "true" : "false") << "\n";
  return out.str();
}

inline nlohmann::json config_to_json(const SimConfig& c) {
  nlohmann::json j;
  j["gamma"] = c.gamma;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["dt"] = c.dt;
  j["dx"] = c.dx;
  j["dy"] = c.dy;
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  j["n_steps"] = c.n_steps;
  j["scheme"] = to_string(c.scheme);
  j["a"] = c.a;
  j["a_as_time"] = c.a_as_time;
  j["eta"] = c.eta;
  j["ic"] = to_string(c.ic);
  j["sigma1"] = c.sigma1;
  j["sigma2"] = c.sigma2;
  j["ic_value"] = c.ic_value;
  j["bc"] = "dirichlet";
  j["bc_value"] = c.bc.value;
  j["snapshot_steps"] = c.snapshot_steps;
  j["threads"] = c.threads;
  j["ll_trace"] = c.ll_trace;
  return j;
}

inline SimConfig config_from_json(const nlohmann::json& j) {
  SimConfig c;
  c.gamma = j.at("gamma").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.dt = j.at("dt").get<double>();
  c.dx = j.at("dx").get<double>();
  c.dy = j.at("dy").get<double>();
  c.nx = j.at("nx").get<int>();
  c.ny = j.at("ny").get<int>();
  c.n_steps = j.at("n_steps").get<std::int64_t>();
  const std::string scheme = j.at("scheme").get<std::string>();
  if (scheme == "full") c.scheme = Scheme::Full;
  else if (scheme == "adaptive") c.scheme = Scheme::Adaptive;
  else if (scheme == "linked") c.scheme = Scheme::Linked;
  else throw ConfigError(0, "unknown scheme '" + scheme + "'");
  c.a = j.at("a").get<double>();
  c.a_as_time = j.at("a_as_time").get<bool>();
  c.eta = j.at("eta").get<std::int64_t>();
  const std::string ic = j.at("ic").get<std::string>();
  if (ic == "gaussian") c.ic = IcKind::Gaussian;
  else if (ic == "uniform") c.ic = IcKind::Uniform;
  else if (ic == "spike") c.ic = IcKind::Spike;
  else throw ConfigError(0, "unknown ic '" + ic + "'");
  c.sigma1 = j.at("sigma1").get<double>();
  c.sigma2 = j.at("sigma2").get<double>();
  c.ic_value = j.at("ic_value").get<double>();
  if (j.at("bc").get<std::string>() != "dirichlet")
    throw ConfigError(0, "unknown bc kind");
  c.bc.value = j.at("bc_value").get<double>();
  c.snapshot_steps = j.at("snapshot_steps").get<std::vector<std::int64_t>>();
  c.threads = j.at("threads").get<int>();
  c.ll_trace = j.at("ll_trace").get<bool>();
  c.validate();
  return c;
}

}  // namespace fracdiff
