#pragma once

#include <string>

#include "config.hpp"

namespace toasync_cli {

// Command implementations behind the `toasync` subcommands. Paths may be
// empty to use the per-command default file name. All throw ConfigError or
// DataError; on success they return normally having written their outputs.

// Writes measurements (k,z11,z12,z21,z22) and the matching truth file (k,x,y)
// for the configured trajectory, biases, noise and seeds. An empty truth_path
// derives one from out_path by inserting `_truth` before the extension.
void command_simulate(const RunConfig& config, std::string out_path,
                      std::string truth_path);

// Reads a measurement CSV and writes per-step estimates
// (k,x,y,b1,b2,iterations,converged).
void command_track(const RunConfig& config, const std::string& in_path,
                   std::string out_path);

// Writes per-step square-root CRLB curves for the configured trajectory
// (k,pos_crlb_root,bias1_crlb_root,bias2_crlb_root).
void command_crlb(const RunConfig& config, std::string out_path);

// Runs the full Monte-Carlo experiment and writes
// k,pos_rmse,pos_crlb_root,bias1_rmse,bias1_crlb_root,bias2_rmse,bias2_crlb_root.
void command_mc(const RunConfig& config, std::string out_path);

std::string derive_truth_path(const std::string& out_path);

}  // namespace toasync_cli
