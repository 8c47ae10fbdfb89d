#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <vector>

#include "toasync/toasync.h"

#include "csv.hpp"

namespace toasync_cli {

namespace {

[[noreturn]] void api_failure(const char* what, toasync_status status) {
  throw DataError(std::string(what) + ": " + toasync_status_name(status) + ": " +
                  toasync_last_error());
}

void check(toasync_status status, const char* what) {
  if (status != TOASYNC_OK) api_failure(what, status);
}

std::vector<double> true_trajectory(const RunConfig& config) {
  const toasync_trajectory_spec spec = config.trajectory_spec();
  std::vector<double> xy(2 * spec.steps);
  check(toasync_generate_trajectory(&spec, xy.data()), "generate trajectory");
  return xy;
}

}  // namespace

std::string derive_truth_path(const std::string& out_path) {
  const std::size_t slash = out_path.find_last_of('/');
  const std::size_t dot = out_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out_path + "_truth";
  }
  return out_path.substr(0, dot) + "_truth" + out_path.substr(dot);
}

void command_simulate(const RunConfig& config, std::string out_path,
                      std::string truth_path) {
  if (out_path.empty()) out_path = "measurements.csv";
  if (truth_path.empty()) truth_path = derive_truth_path(out_path);

  const std::vector<double> xy = true_trajectory(config);
  const std::uint64_t n = config.traj_steps;

  std::vector<toasync_frame> frames(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    check(toasync_synthesize(xy[2 * i], xy[2 * i + 1], &config.anchors, config.bias1,
                             config.bias2, config.sigma, config.noise_seed_base, i + 1,
                             &frames[i]),
          "synthesize");
  }
  write_file(out_path, measurements_to_csv(frames));

  std::string truth = "k,x,y\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    truth += std::to_string(i + 1);
    truth += ',';
    truth += format_double(xy[2 * i]);
    truth += ',';
    truth += format_double(xy[2 * i + 1]);
    truth += '\n';
  }
  write_file(truth_path, truth);
}

void command_track(const RunConfig& config, const std::string& in_path,
                   std::string out_path) {
  if (in_path.empty()) throw ConfigError("track: --in PATH is required");
  if (out_path.empty()) out_path = "track.csv";

  const std::vector<toasync_frame> frames = parse_measurements_csv(read_file(in_path));

  toasync_estimator* estimator = nullptr;
  check(toasync_estimator_create(&config.anchors, &config.solver, 0, &estimator),
        "create estimator");

  std::string out = "k,x,y,b1,b2,iterations,converged\n";
  toasync_step_result last{0, 0, 0, 0, 0, 0};
  std::uint64_t failures = 0;
  for (const toasync_frame& input : frames) {
    toasync_frame frame = input;
    // Keep feeding after a failed step: the estimator's own count lags the
    // file's step column in that case.
    frame.step = toasync_estimator_step_count(estimator) + 1;
    toasync_step_result result;
    const toasync_status status = toasync_estimator_step(estimator, &frame, &result);
    if (status == TOASYNC_OK) {
      last = result;
    } else {
      ++failures;
      result = last;
      result.iterations = 0;
      result.converged = 0;
    }
    out += std::to_string(input.step);
    out += ',';
    out += format_double(result.x);
    out += ',';
    out += format_double(result.y);
    out += ',';
    out += format_double(result.b1);
    out += ',';
    out += format_double(result.b2);
    out += ',';
    out += std::to_string(result.iterations);
    out += ',';
    out += std::to_string(result.converged);
    out += '\n';
  }
  toasync_estimator_destroy(estimator);
  if (failures > 0) {
    std::cerr << "track: " << failures << " step(s) failed and carry the previous estimate\n";
  }
  write_file(out_path, out);
}

void command_crlb(const RunConfig& config, std::string out_path) {
  if (out_path.empty()) out_path = "crlb.csv";
  if (!(config.sigma > 0)) {
    throw ConfigError("crlb: 'noise.sigma' must be > 0 for bound evaluation");
  }

  const std::vector<double> xy = true_trajectory(config);
  const std::uint64_t n = config.traj_steps;
  std::vector<double> bounds(3 * n);
  check(toasync_crlb_trajectory(xy.data(), n, &config.anchors, config.sigma, bounds.data()),
        "crlb trajectory");

  std::string out = "k,pos_crlb_root,bias1_crlb_root,bias2_crlb_root\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(std::sqrt(bounds[3 * i + 0]));
    out += ',';
    out += format_double(std::sqrt(bounds[3 * i + 1]));
    out += ',';
    out += format_double(std::sqrt(bounds[3 * i + 2]));
    out += '\n';
  }
  write_file(out_path, out);
}

void command_mc(const RunConfig& config, std::string out_path) {
  if (out_path.empty()) out_path = "mc_report.csv";

  const toasync_trajectory_spec traj = config.trajectory_spec();
  const toasync_mc_spec mc = config.mc_spec();
  const std::uint64_t n = config.traj_steps;

  std::vector<double> pos_rmse(n), pos_crlb(n), b1_rmse(n), b1_crlb(n), b2_rmse(n),
      b2_crlb(n);
  toasync_mc_report report{pos_rmse.data(), pos_crlb.data(), b1_rmse.data(),
                           b1_crlb.data(),  b2_rmse.data(),  b2_crlb.data(), 0};
  check(toasync_run_monte_carlo(&traj, &config.anchors, &mc, &report), "monte carlo");
  if (report.flagged_steps > 0) {
    std::cerr << "mc: " << report.flagged_steps
              << " flagged step result(s) across trials (included in RMSE)\n";
  }

  std::string out =
      "k,pos_rmse,pos_crlb_root,bias1_rmse,bias1_crlb_root,bias2_rmse,bias2_crlb_root\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(pos_rmse[i]);
    out += ',';
    out += format_double(pos_crlb[i]);
    out += ',';
    out += format_double(b1_rmse[i]);
    out += ',';
    out += format_double(b1_crlb[i]);
    out += ',';
    out += format_double(b2_rmse[i]);
    out += ',';
    out += format_double(b2_crlb[i]);
    out += '\n';
  }
  write_file(out_path, out);
}

}  // namespace toasync_cli
