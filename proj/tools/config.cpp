#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace toasync_cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& key, int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": key '" + key + "': " + what);
}

double parse_double(const std::string& key, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) bad_value(key, line, "trailing characters in number '" + v + "'");
    if (!std::isfinite(d)) bad_value(key, line, "value must be finite");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, line, "expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, int line, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    bad_value(key, line, "expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

void parse_pair(const std::string& key, int line, const std::string& v, double out[2]) {
  std::string normalized = v;
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(normalized);
  std::string a, b, rest;
  if (!(in >> a >> b) || (in >> rest)) {
    bad_value(key, line, "expected two numbers, got '" + v + "'");
  }
  out[0] = parse_double(key, line, a);
  out[1] = parse_double(key, line, b);
}

}  // namespace

toasync_trajectory_spec RunConfig::trajectory_spec() const {
  return toasync_trajectory_spec{traj_start[0], traj_start[1], traj_steps,
                                 traj_dt, traj_speed_std, traj_seed};
}

toasync_mc_spec RunConfig::mc_spec() const {
  return toasync_mc_spec{mc_trials, noise_seed_base, solver, bias1, bias2, sigma};
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line) + ": empty key");
    }
    if (value.empty()) {
      throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                        "': empty value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(line) + ": duplicate key '" +
                        key + "'");
    }

    if (key == "anchors.p11") parse_pair(key, line, value, cfg.anchors.p11);
    else if (key == "anchors.p12") parse_pair(key, line, value, cfg.anchors.p12);
    else if (key == "anchors.p21") parse_pair(key, line, value, cfg.anchors.p21);
    else if (key == "anchors.p22") parse_pair(key, line, value, cfg.anchors.p22);
    else if (key == "anchors.spacing") cfg.anchors.spacing = parse_double(key, line, value);
    else if (key == "bias.b1") cfg.bias1 = parse_double(key, line, value);
    else if (key == "bias.b2") cfg.bias2 = parse_double(key, line, value);
    else if (key == "noise.sigma") cfg.sigma = parse_double(key, line, value);
    else if (key == "trajectory.start") parse_pair(key, line, value, cfg.traj_start);
    else if (key == "trajectory.steps") cfg.traj_steps = parse_u64(key, line, value);
    else if (key == "trajectory.dt") cfg.traj_dt = parse_double(key, line, value);
    else if (key == "trajectory.speed_std") cfg.traj_speed_std = parse_double(key, line, value);
    else if (key == "trajectory.seed") {
      cfg.traj_seed = parse_u64(key, line, value);
      cfg.traj_seed_explicit = true;
    } else if (key == "mc.trials") cfg.mc_trials = parse_u64(key, line, value);
    else if (key == "mc.noise_seed_base") {
      cfg.noise_seed_base = parse_u64(key, line, value);
      cfg.noise_seed_explicit = true;
    } else if (key == "solver.epsilon") cfg.solver.epsilon = parse_double(key, line, value);
    else if (key == "solver.max_iterations") {
      cfg.solver.max_iterations = static_cast<int>(parse_u64(key, line, value));
    } else if (key == "solver.condition_guard") {
      cfg.solver.condition_guard = parse_double(key, line, value);
    } else if (key == "seed") cfg.seed = parse_u64(key, line, value);
    else if (key == "output.path") cfg.output_path = value;
    else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" +
                        key + "'");
    }
  }

  if (!cfg.traj_seed_explicit) cfg.traj_seed = cfg.seed;
  if (!cfg.noise_seed_explicit) cfg.noise_seed_base = cfg.seed + 1;

  // Cross-field validation, each diagnostic naming the offending key.
  if (cfg.sigma < 0) throw ConfigError("config: 'noise.sigma' must be >= 0");
  if (cfg.traj_steps < 1) throw ConfigError("config: 'trajectory.steps' must be >= 1");
  if (!(cfg.traj_dt > 0)) throw ConfigError("config: 'trajectory.dt' must be > 0");
  if (cfg.traj_speed_std < 0) {
    throw ConfigError("config: 'trajectory.speed_std' must be >= 0");
  }
  if (cfg.mc_trials < 1) throw ConfigError("config: 'mc.trials' must be >= 1");
  if (!(cfg.solver.epsilon > 0)) throw ConfigError("config: 'solver.epsilon' must be > 0");
  if (cfg.solver.max_iterations < 1) {
    throw ConfigError("config: 'solver.max_iterations' must be >= 1");
  }
  if (!(cfg.solver.condition_guard > 0)) {
    throw ConfigError("config: 'solver.condition_guard' must be > 0");
  }
  if (toasync_anchors_validate(&cfg.anchors) != TOASYNC_OK) {
    throw ConfigError(std::string("config: 'anchors.*': ") + toasync_last_error());
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_seed_override(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  if (!config.traj_seed_explicit) config.traj_seed = seed;
  if (!config.noise_seed_explicit) config.noise_seed_base = seed + 1;
}

}  // namespace toasync_cli
