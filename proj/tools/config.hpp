#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "toasync/toasync.h"

namespace toasync_cli {

// Configuration or usage problem; maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime or data problem (I/O, malformed input file); maps to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully resolved run configuration. Defaults reproduce the reference indoor
// scenario: antennas at (-51,-100) (-49,-100) (49,-100) (51,-100), spacing 2,
// biases (5,-5), sigma 0.01, random walk from (0,50) with 3000 steps of 0.5 s
// at 0.5 m/s increment std, 5000 trials, solver epsilon 0.05 / 5 iterations.
struct RunConfig {
  toasync_anchors anchors{{-51, -100}, {-49, -100}, {49, -100}, {51, -100}, 2.0};
  double bias1 = 5.0;
  double bias2 = -5.0;
  double sigma = 1e-2;

  double traj_start[2] = {0.0, 50.0};
  std::uint64_t traj_steps = 3000;
  double traj_dt = 0.5;
  double traj_speed_std = 0.5;

  std::uint64_t mc_trials = 5000;

  toasync_solver_config solver{0.05, 5, 1e8};

  // Master seed. trajectory.seed defaults to it and mc.noise_seed_base to
  // seed + 1 unless those keys are set explicitly.
  std::uint64_t seed = 1;
  std::uint64_t traj_seed = 1;
  std::uint64_t noise_seed_base = 2;
  bool traj_seed_explicit = false;
  bool noise_seed_explicit = false;

  std::string output_path;  // empty: per-command default file name

  toasync_trajectory_spec trajectory_spec() const;
  toasync_mc_spec mc_spec() const;
};

// Parses the flat `section.key = value` format; `#` starts a comment. Unknown
// or duplicate keys and invariant violations raise ConfigError naming the key
// and line. Empty text yields the defaults above.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

// Replaces the master seed (--seed flag) and re-derives the dependent seeds
// that were not set explicitly in the config.
void apply_seed_override(RunConfig& config, std::uint64_t seed);

}  // namespace toasync_cli
