#include "toasync/toasync.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/crlb.hpp"
#include "core/errors.hpp"
#include "core/estimator.hpp"
#include "core/model.hpp"
#include "core/sim.hpp"

using namespace toasync;

namespace {

thread_local std::string g_last_error;

toasync_status status_from(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return TOASYNC_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return TOASYNC_ERR_DIMENSION_MISMATCH;
    case ErrorCode::SingularTriangular: return TOASYNC_ERR_SINGULAR;
    case ErrorCode::InvalidRange: return TOASYNC_ERR_INVALID_RANGE;
    case ErrorCode::ParallelBearings: return TOASYNC_ERR_PARALLEL_BEARINGS;
    case ErrorCode::DegenerateGeometry: return TOASYNC_ERR_DEGENERATE_GEOMETRY;
    case ErrorCode::GeometryIllConditioned: return TOASYNC_ERR_ILL_CONDITIONED;
    case ErrorCode::SingularFim: return TOASYNC_ERR_SINGULAR_FIM;
    case ErrorCode::NotAvailable: return TOASYNC_ERR_NOT_AVAILABLE;
  }
  return TOASYNC_ERR_INTERNAL;
}

toasync_status fail(toasync_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
toasync_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TOASYNC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TOASYNC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TOASYNC_ERR_INTERNAL;
  }
}

AnchorArray to_core(const toasync_anchors& a) {
  return AnchorArray{{a.p11[0], a.p11[1]},
                     {a.p12[0], a.p12[1]},
                     {a.p21[0], a.p21[1]},
                     {a.p22[0], a.p22[1]},
                     a.spacing};
}

SolverConfig to_core(const toasync_solver_config& c) {
  SolverConfig out;
  out.epsilon = c.epsilon;
  out.max_iterations = c.max_iterations;
  out.condition_guard = c.condition_guard;
  return out;
}

MeasurementFrame to_core(const toasync_frame& f) {
  return MeasurementFrame{f.z11, f.z12, f.z21, f.z22, f.step};
}

}  // namespace

struct toasync_estimator {
  Estimator impl;
};

extern "C" {

const char* toasync_version(void) { return "0.1.0"; }

const char* toasync_last_error(void) { return g_last_error.c_str(); }

const char* toasync_status_name(toasync_status status) {
  switch (status) {
    case TOASYNC_OK: return "ok";
    case TOASYNC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TOASYNC_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case TOASYNC_ERR_SINGULAR: return "singular";
    case TOASYNC_ERR_INVALID_RANGE: return "invalid_range";
    case TOASYNC_ERR_PARALLEL_BEARINGS: return "parallel_bearings";
    case TOASYNC_ERR_DEGENERATE_GEOMETRY: return "degenerate_geometry";
    case TOASYNC_ERR_ILL_CONDITIONED: return "ill_conditioned";
    case TOASYNC_ERR_SINGULAR_FIM: return "singular_fim";
    case TOASYNC_ERR_NOT_AVAILABLE: return "not_available";
    case TOASYNC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

toasync_status toasync_anchors_validate(const toasync_anchors* anchors) {
  if (anchors == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "anchors is null");
  }
  return guarded([&] { validate(to_core(*anchors)); });
}

void toasync_default_solver_config(toasync_solver_config* out) {
  if (out == nullptr) return;
  const SolverConfig d;
  out->epsilon = d.epsilon;
  out->max_iterations = d.max_iterations;
  out->condition_guard = d.condition_guard;
}

toasync_status toasync_synthesize(double x, double y, const toasync_anchors* anchors,
                                  double b1, double b2, double sigma, uint64_t seed,
                                  uint64_t step, toasync_frame* out) {
  if (anchors == nullptr || out == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "anchors/out is null");
  }
  if (sigma < 0) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "sigma must be >= 0");
  }
  return guarded([&] {
    const MeasurementFrame f = synthesize(TargetPosition{x, y}, to_core(*anchors),
                                          ClockBias{b1, b2}, NoiseSpec{sigma, seed}, step);
    *out = toasync_frame{f.z11, f.z12, f.z21, f.z22, f.step};
  });
}

toasync_status toasync_estimator_create(const toasync_anchors* anchors,
                                        const toasync_solver_config* config,
                                        int retain_history, toasync_estimator** out) {
  if (anchors == nullptr || config == nullptr || out == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "anchors/config/out is null");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new toasync_estimator{
        Estimator(to_core(*anchors), to_core(*config), retain_history != 0)};
  });
}

void toasync_estimator_destroy(toasync_estimator* estimator) { delete estimator; }

toasync_status toasync_estimator_step(toasync_estimator* estimator,
                                      const toasync_frame* frame,
                                      toasync_step_result* out) {
  if (estimator == nullptr || frame == nullptr || out == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "estimator/frame/out is null");
  }
  return guarded([&] {
    const StepResult r = estimator->impl.step(to_core(*frame));
    *out = toasync_step_result{r.position.x, r.position.y, r.bias.b1, r.bias.b2,
                               r.iterations, r.converged ? 1 : 0};
  });
}

uint64_t toasync_estimator_step_count(const toasync_estimator* estimator) {
  return estimator == nullptr ? 0 : estimator->impl.step_count();
}

toasync_status toasync_estimator_smooth(const toasync_estimator* estimator,
                                        double* xy_out, uint64_t capacity) {
  if (estimator == nullptr || xy_out == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "estimator/xy_out is null");
  }
  if (capacity < 2 * estimator->impl.step_count()) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "xy_out capacity too small");
  }
  return guarded([&] {
    const auto positions = estimator->impl.smooth_all();
    for (std::size_t i = 0; i < positions.size(); ++i) {
      xy_out[2 * i] = positions[i].x;
      xy_out[2 * i + 1] = positions[i].y;
    }
  });
}

toasync_status toasync_generate_trajectory(const toasync_trajectory_spec* spec,
                                           double* xy_out) {
  if (spec == nullptr || xy_out == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "spec/xy_out is null");
  }
  return guarded([&] {
    const TrajectorySpec s{TargetPosition{spec->start_x, spec->start_y}, spec->steps,
                           spec->dt, spec->speed_std, spec->seed};
    const auto traj = generate_trajectory(s);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      xy_out[2 * i] = traj[i].x;
      xy_out[2 * i + 1] = traj[i].y;
    }
  });
}

toasync_status toasync_crlb_trajectory(const double* xy, uint64_t n,
                                       const toasync_anchors* anchors, double sigma,
                                       double* out) {
  if (xy == nullptr || anchors == nullptr || out == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "xy/anchors/out is null");
  }
  if (n == 0) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "trajectory is empty");
  }
  return guarded([&] {
    std::vector<TargetPosition> traj(n);
    for (std::uint64_t i = 0; i < n; ++i) traj[i] = TargetPosition{xy[2 * i], xy[2 * i + 1]};
    const auto bounds = crlb_trajectory(traj, to_core(*anchors), sigma);
    for (std::uint64_t i = 0; i < n; ++i) {
      out[3 * i + 0] = bounds[i].pos;
      out[3 * i + 1] = bounds[i].bias1;
      out[3 * i + 2] = bounds[i].bias2;
    }
  });
}

toasync_status toasync_run_monte_carlo(const toasync_trajectory_spec* traj,
                                       const toasync_anchors* anchors,
                                       const toasync_mc_spec* mc,
                                       toasync_mc_report* report) {
  if (traj == nullptr || anchors == nullptr || mc == nullptr || report == nullptr) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "traj/anchors/mc/report is null");
  }
  if (mc->sigma < 0) {
    return fail(TOASYNC_ERR_INVALID_ARGUMENT, "sigma must be >= 0");
  }
  return guarded([&] {
    const TrajectorySpec ts{TargetPosition{traj->start_x, traj->start_y}, traj->steps,
                            traj->dt, traj->speed_std, traj->seed};
    McSpec ms;
    ms.trials = mc->trials;
    ms.noise_seed_base = mc->noise_seed_base;
    ms.solver = to_core(mc->solver);
    ms.bias = ClockBias{mc->b1, mc->b2};
    ms.sigma = mc->sigma;
    const McReport r = run_monte_carlo(ts, to_core(*anchors), ms);
    const std::size_t n = r.pos_rmse.size();
    auto copy_column = [n](double* dst, const std::vector<double>& src) {
      if (dst != nullptr) std::memcpy(dst, src.data(), n * sizeof(double));
    };
    copy_column(report->pos_rmse, r.pos_rmse);
    copy_column(report->pos_crlb_root, r.pos_crlb_root);
    copy_column(report->bias1_rmse, r.bias1_rmse);
    copy_column(report->bias1_crlb_root, r.bias1_crlb_root);
    copy_column(report->bias2_rmse, r.bias2_rmse);
    copy_column(report->bias2_crlb_root, r.bias2_crlb_root);
    report->flagged_steps = r.flagged_steps;
  });
}

}  // extern "C"
