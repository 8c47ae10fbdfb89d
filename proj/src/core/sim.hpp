#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/estimator.hpp"
#include "core/model.hpp"

namespace toasync {

// Random-walk trajectory: starts at `start`, then per-axis iid Gaussian
// increments with standard deviation speed_std * dt per step.
struct TrajectorySpec {
  TargetPosition start{0, 50};
  std::uint64_t steps = 1;
  double dt = 0.5;        // sample interval, s
  double speed_std = 0.5; // increment std, m/s
  std::uint64_t seed = 1;
};

struct McSpec {
  std::uint64_t trials = 1;
  std::uint64_t noise_seed_base = 0;  // trial m uses seed noise_seed_base + m
  SolverConfig solver;
  ClockBias bias;
  double sigma = 0;
};

// Per-step RMSE curves over the Monte-Carlo trials, alongside the matching
// square-root CRLB curves evaluated on the true trajectory. All lengths equal
// the trajectory step count. The CRLB columns are zero when sigma is zero.
struct McReport {
  TrajectorySpec trajectory;
  McSpec mc;
  AnchorArray anchors;

  std::vector<double> pos_rmse;
  std::vector<double> bias1_rmse;
  std::vector<double> bias2_rmse;
  std::vector<double> pos_crlb_root;
  std::vector<double> bias1_crlb_root;
  std::vector<double> bias2_crlb_root;

  // Step results flagged unconverged across all trials; flagged steps still
  // enter the RMSE.
  std::uint64_t flagged_steps = 0;
};

std::vector<TargetPosition> generate_trajectory(const TrajectorySpec& spec);

// One full tracking run over a shared true trajectory with an independent
// noise realization. Estimator failures at a step are recorded as flagged
// results carrying the previous estimate; the trial continues.
std::vector<StepResult> run_trial(std::span<const TargetPosition> trajectory,
                                  const AnchorArray& anchors, const ClockBias& bias,
                                  double sigma, std::uint64_t trial_seed,
                                  const SolverConfig& solver);

// Runs mc.trials independent trials of the shared trajectory and reduces them
// into per-step RMSE curves. Trials execute on a fixed chunk grid so the
// reduction order (and therefore the report, bit for bit) does not depend on
// thread scheduling.
McReport run_monte_carlo(const TrajectorySpec& traj_spec, const AnchorArray& anchors,
                         const McSpec& mc);

// Lossless JSON round trip of a report including all spec fields and seeds.
std::string mc_report_to_json(const McReport& report);
McReport mc_report_from_json(const std::string& text);

}  // namespace toasync
