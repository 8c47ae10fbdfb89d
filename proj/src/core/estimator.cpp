#include "core/estimator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <string>

namespace toasync {

namespace {

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

double receiver_aoa(double z1, double z2, double a, const char* which) {
  if (!(z1 > 0)) {
    throw Error(ErrorCode::InvalidRange,
                std::string("aoa: nonpositive leading range at receiver ") + which);
  }
  const double dz = z1 - z2;
  const double arg = (a * a - dz * dz + 2.0 * z1 * dz) / (2.0 * z1 * a);
  return std::acos(clamp_unit(arg));
}

// Ranges and the unit-row Jacobian share the same four norms.
struct Linearization {
  Mat jac;                      // 4x2
  std::array<double, 4> ranges;
};

Linearization linearize(const TargetPosition& x, const AnchorArray& a) {
  Linearization lin{Mat(4, 2), {}};
  const auto ps = antennas(a);
  for (std::size_t i = 0; i < 4; ++i) {
    const double dx = x.x - ps[i].x;
    const double dy = x.y - ps[i].y;
    const double d = std::hypot(dx, dy);
    if (d == 0.0) {
      throw Error(ErrorCode::DegenerateGeometry,
                  "jacobian: target coincides with antenna " + std::to_string(i));
    }
    lin.ranges[i] = d;
    lin.jac(i, 0) = dx / d;
    lin.jac(i, 1) = dy / d;
    assert(std::abs(std::hypot(lin.jac(i, 0), lin.jac(i, 1)) - 1.0) < 1e-12);
  }
  ops::add(28, 4);
  return lin;
}

TargetPosition parallel_fallback(const AnchorArray& a) {
  // Midpoint between the receivers, pushed one unit off their connecting line.
  const Vec2 c1{0.5 * (a.p11.x + a.p12.x), 0.5 * (a.p11.y + a.p12.y)};
  const Vec2 c2{0.5 * (a.p21.x + a.p22.x), 0.5 * (a.p21.y + a.p22.y)};
  const double dx = c2.x - c1.x;
  const double dy = c2.y - c1.y;
  const double d = std::hypot(dx, dy);
  const Vec2 mid{0.5 * (c1.x + c2.x), 0.5 * (c1.y + c2.y)};
  if (d == 0.0) return {mid.x, mid.y + 1.0};
  return {mid.x - dy / d, mid.y + dx / d};
}

}  // namespace

AoaEstimate aoa_from_frame(const MeasurementFrame& frame, const AnchorArray& a) {
  if (!(a.spacing > 0)) {
    throw Error(ErrorCode::InvalidArgument, "aoa: antenna spacing must be positive");
  }
  return AoaEstimate{receiver_aoa(frame.z11, frame.z12, a.spacing, "1"),
                     receiver_aoa(frame.z21, frame.z22, a.spacing, "2")};
}

TargetPosition intersect_bearings(const AoaEstimate& aoa, const AnchorArray& a) {
  const double s1 = std::sin(aoa.alpha11), c1 = std::cos(aoa.alpha11);
  const double s2 = std::sin(aoa.alpha21), c2 = std::cos(aoa.alpha21);
  // Rows of the bearing-line normal matrix; det = sin(alpha21 - alpha11).
  const double g00 = -s1, g01 = c1, g10 = -s2, g11 = c2;
  const double d = g00 * g11 - g01 * g10;
  if (std::abs(d) < 1e-10) {
    throw Error(ErrorCode::ParallelBearings, "bearing lines do not intersect uniquely");
  }
  const double rhs1 = a.p11.y * c1 - a.p11.x * s1;
  const double rhs2 = a.p21.y * c2 - a.p21.x * s2;
  return TargetPosition{(rhs1 * g11 - g01 * rhs2) / d, (g00 * rhs2 - rhs1 * g10) / d};
}

Mat jacobian(const TargetPosition& x, const AnchorArray& a) {
  return linearize(x, a).jac;
}

Estimator::Estimator(const AnchorArray& anchors, const SolverConfig& cfg,
                     bool retain_history)
    : anchors_(anchors), cfg_(cfg), retain_history_(retain_history) {
  validate(anchors_);
  if (!(cfg_.epsilon > 0)) {
    throw Error(ErrorCode::InvalidArgument, "solver: epsilon must be positive");
  }
  if (cfg_.max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "solver: max_iterations must be >= 1");
  }
}

StepResult Estimator::step(const MeasurementFrame& frame) {
  if (frame.step != k_ + 1) {
    throw Error(ErrorCode::InvalidArgument,
                "step: frame index " + std::to_string(frame.step) +
                    " does not follow step count " + std::to_string(k_));
  }
  return run_step(frame);
}

StepResult Estimator::run_step(const MeasurementFrame& frame) {
  const bool first = (k_ == 0);

  OpCounts step_ops;
  std::optional<OpCountScope> scope;
  if (cfg_.count_ops) scope.emplace(step_ops);

  TargetPosition x_tilde;
  bool init_fell_back = false;
  if (first) {
    try {
      x_tilde = intersect_bearings(aoa_from_frame(frame, anchors_), anchors_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParallelBearings) throw;
      x_tilde = parallel_fallback(anchors_);
      init_fell_back = true;
    }
  } else {
    x_tilde = x_;
  }

  // Snapshot of the accumulated factor at step entry; every pass below
  // rebuilds the update from here so re-iteration cannot double-count the
  // step's equations.
  const Mat snapshot_t = t_;
  const Mat snapshot_s = s_hat_;

  const Mat z(4, 1, {frame.z11, frame.z12, frame.z21, frame.z22});
  const Mat bias_pattern = bias_matrix();

  Mat t_cand, s_hat_cand;
  double s_check_sq = 0;
  ClockBias b_used = bias_;
  bool guard_tripped = false;
  TargetPosition x_new{};
  HistoryEntry entry;
  int iterations = 0;
  bool converged = false;

  while (true) {
    const Linearization lin = linearize(x_tilde, anchors_);
    const QrFactor qr = householder_qr(lin.jac);

    const Mat qt_a = apply_qt(qr, bias_pattern);
    const Mat f_coupling = qt_a.top_rows(2);
    const Mat g_coupling = qt_a.bottom_rows(2);

    Mat w(4, 1);
    w(0, 0) = z(0, 0) - lin.ranges[0];
    w(1, 0) = z(1, 0) - lin.ranges[1];
    w(2, 0) = z(2, 0) - lin.ranges[2];
    w(3, 0) = z(3, 0) - lin.ranges[3];
    ops::add(4);
    const Mat qt_w = apply_qt(qr, w);
    const Mat r_resid = qt_w.top_rows(2);
    const Mat s_resid = qt_w.bottom_rows(2);

    // Fold the step's bias equations into the accumulated factor.
    const Mat stacked_g = first ? g_coupling : vstack(snapshot_t, g_coupling);
    const Mat stacked_s = first ? s_resid : vstack(snapshot_s, s_resid);
    const QrFactor update_qr = householder_qr(stacked_g);
    const Mat transformed = apply_qt(update_qr, stacked_s);
    t_cand = update_qr.r.top_rows(2);
    s_hat_cand = transformed.top_rows(2);
    s_check_sq = 0;
    for (std::size_t i = 2; i < transformed.rows(); ++i) {
      s_check_sq += transformed(i, 0) * transformed(i, 0);
    }

    guard_tripped = cond_2x2(t_cand) > cfg_.condition_guard;
    if (guard_tripped) {
      b_used = bias_;  // hold the previous estimate until geometry accumulates
    } else {
      try {
        const Mat b = solve_upper_triangular(t_cand, s_hat_cand);
        b_used = ClockBias{b(0, 0), b(1, 0)};
      } catch (const SingularTriangularError&) {
        throw Error(ErrorCode::GeometryIllConditioned,
                    "step: accumulated bias factor is singular");
      }
    }

    const Mat r_factor = qr.r.top_rows(2);
    Mat rhs(2, 1);
    rhs(0, 0) = r_resid(0, 0) - (f_coupling(0, 0) * b_used.b1 + f_coupling(0, 1) * b_used.b2);
    rhs(1, 0) = r_resid(1, 0) - (f_coupling(1, 0) * b_used.b1 + f_coupling(1, 1) * b_used.b2);
    ops::add(8);
    Mat dx;
    try {
      dx = solve_upper_triangular(r_factor, rhs);
    } catch (const SingularTriangularError&) {
      throw Error(ErrorCode::GeometryIllConditioned,
                  "step: position factor is singular (degenerate geometry)");
    }

    x_new = TargetPosition{x_tilde.x + dx(0, 0), x_tilde.y + dx(1, 0)};
    ++iterations;

    if (retain_history_) {
      entry = HistoryEntry{r_factor, r_resid, f_coupling, g_coupling, s_resid, x_tilde};
    }

    const double inc_sq = dx(0, 0) * dx(0, 0) + dx(1, 0) * dx(1, 0);
    ops::add(4);
    if (inc_sq <= cfg_.epsilon * cfg_.epsilon) {
      converged = true;
      break;
    }
    if (iterations >= cfg_.max_iterations) break;
    x_tilde = x_new;
  }

  // Commit the final pass only.
  t_ = t_cand;
  s_hat_ = s_hat_cand;
  residual_sq_ += s_check_sq;
  bias_ = b_used;
  x_ = x_new;
  ++k_;
  if (retain_history_) history_.push_back(std::move(entry));
  last_ops_ = cfg_.count_ops ? step_ops : OpCounts{};

  if (guard_tripped || init_fell_back) converged = false;
  return StepResult{x_new, b_used, iterations, converged};
}

std::vector<TargetPosition> Estimator::smooth_all() const {
  if (!retain_history_) {
    throw Error(ErrorCode::NotAvailable, "smooth_all: history retention is disabled");
  }
  std::vector<TargetPosition> out;
  out.reserve(history_.size());
  for (const HistoryEntry& h : history_) {
    Mat rhs(2, 1);
    rhs(0, 0) = h.r_resid(0, 0) -
                (h.f_coupling(0, 0) * bias_.b1 + h.f_coupling(0, 1) * bias_.b2);
    rhs(1, 0) = h.r_resid(1, 0) -
                (h.f_coupling(1, 0) * bias_.b1 + h.f_coupling(1, 1) * bias_.b2);
    Mat dx;
    try {
      dx = solve_upper_triangular(h.r_factor, rhs);
    } catch (const SingularTriangularError&) {
      throw Error(ErrorCode::GeometryIllConditioned,
                  "smooth_all: stored position factor is singular");
    }
    out.push_back(TargetPosition{h.lin_point.x + dx(0, 0), h.lin_point.y + dx(1, 0)});
  }
  return out;
}

}  // namespace toasync
