#pragma once

#include <cstdint>
#include <vector>

#include "core/mat.hpp"
#include "core/model.hpp"
#include "core/ops_count.hpp"

namespace toasync {

// Angles of arrival at the first antenna of each receiver, measured from the
// respective antenna baseline, each in [0, pi].
struct AoaEstimate {
  double alpha11 = 0;
  double alpha21 = 0;
};

struct SolverConfig {
  // Convergence tolerance on the position increment per Gauss-Newton pass (m).
  double epsilon = 0.05;
  // Maximum Gauss-Newton passes per time step.
  int max_iterations = 5;
  // The bias solve is skipped (previous estimate held, step flagged) when the
  // condition estimate of the accumulated triangular factor exceeds this.
  double condition_guard = 1e8;
  // Tally arithmetic cost per step (see Estimator::last_step_ops).
  bool count_ops = false;
};

struct StepResult {
  TargetPosition position;
  ClockBias bias;
  int iterations = 0;
  bool converged = false;
};

// Angle of arrival from one frame's range pairs: for receiver i,
//   alpha_i = arccos((a^2 - dz_i^2 + 2 z_i1 dz_i) / (2 z_i1 a)),
// dz_i = z_i1 - z_i2, with the arccos argument clamped to [-1, 1] since noise
// can push it slightly outside. Throws Error(InvalidRange) when z_i1 <= 0.
AoaEstimate aoa_from_frame(const MeasurementFrame& frame, const AnchorArray& a);

// Intersects the two bearing lines anchored at p11 and p21. Throws
// Error(ParallelBearings) when the lines are parallel to within 1e-10 on the
// bearing-matrix determinant.
TargetPosition intersect_bearings(const AoaEstimate& aoa, const AnchorArray& a);

// 4x2 matrix of unit rows (x - p_ij)^T / |x - p_ij| in measurement order.
// Throws Error(DegenerateGeometry) when x coincides with an antenna.
Mat jacobian(const TargetPosition& x, const AnchorArray& a);

// Per-step record kept when history retention is enabled: the final
// Gauss-Newton pass's factors at that step, for later re-solution of past
// positions against an improved bias estimate.
struct HistoryEntry {
  Mat r_factor;    // 2x2 upper triangular position factor
  Mat r_resid;     // 2x1 range-space residual
  Mat f_coupling;  // 2x2 range-space bias coupling
  Mat g_coupling;  // 2x2 null-space bias coupling
  Mat s_resid;     // 2x1 null-space residual
  TargetPosition lin_point;
};

// Time-recursive joint position/clock-bias estimator.
//
// Feed one MeasurementFrame per time step. The first frame initializes the
// position from the angle-of-arrival construction and runs a Gauss-Newton
// refinement on that step's data alone; every later frame runs Gauss-Newton
// passes that fold the step's whitened bias equations into a running 2x2
// triangular factor via orthogonal updates, so per-step cost and memory stay
// constant in the step count.
//
// Within a step, each pass rebuilds the factor update from the snapshot taken
// at step entry (never from an already-updated factor), and only the final
// pass's update is committed; the accumulated system therefore always equals
// the batch problem under the final linearization points.
class Estimator {
 public:
  Estimator(const AnchorArray& anchors, const SolverConfig& cfg,
            bool retain_history = false);

  // Processes the next frame; frame.step must equal step_count() + 1.
  // Throws Error(GeometryIllConditioned) when a triangular solve degenerates;
  // the estimator state is unchanged in that case and the frame may be
  // retried or skipped by re-stamping the next frame's step index.
  StepResult step(const MeasurementFrame& frame);

  std::uint64_t step_count() const noexcept { return k_; }
  TargetPosition position() const noexcept { return x_; }
  ClockBias bias() const noexcept { return bias_; }

  // Accumulated squared norm of residual components discarded by the
  // orthogonal updates; together with |bias_rhs|^2 this preserves the total
  // squared norm of all null-space residuals seen so far.
  double residual_sq() const noexcept { return residual_sq_; }
  const Mat& bias_factor() const noexcept { return t_; }  // 2x2 upper triangular
  const Mat& bias_rhs() const noexcept { return s_hat_; }  // 2x1

  bool retains_history() const noexcept { return retain_history_; }
  const std::vector<HistoryEntry>& history() const noexcept { return history_; }

  // Re-solves every retained step's position against the current bias
  // estimate. Throws Error(NotAvailable) when history retention is off.
  std::vector<TargetPosition> smooth_all() const;

  // Cost tally of the most recent step (all passes); zeros unless
  // SolverConfig::count_ops was set.
  OpCounts last_step_ops() const noexcept { return last_ops_; }

 private:
  StepResult run_step(const MeasurementFrame& frame);

  AnchorArray anchors_;
  SolverConfig cfg_;
  bool retain_history_;

  std::uint64_t k_ = 0;
  TargetPosition x_{};
  ClockBias bias_{};
  double residual_sq_ = 0;
  Mat t_;      // empty until the first step commits
  Mat s_hat_;
  std::vector<HistoryEntry> history_;
  OpCounts last_ops_;
};

}  // namespace toasync
