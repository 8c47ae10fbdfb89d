/* toasync: joint TOA localization and clock-bias estimation.
 *
 * C API over the estimation core. All functions return a toasync_status;
 * on failure a thread-local message is available via toasync_last_error().
 * Handles are opaque and single-owner; no function keeps references to
 * caller memory beyond the call.
 */
#ifndef TOASYNC_H
#define TOASYNC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum toasync_status {
  TOASYNC_OK = 0,
  TOASYNC_ERR_INVALID_ARGUMENT = 1,
  TOASYNC_ERR_DIMENSION_MISMATCH = 2,
  TOASYNC_ERR_SINGULAR = 3,
  TOASYNC_ERR_INVALID_RANGE = 4,
  TOASYNC_ERR_PARALLEL_BEARINGS = 5,
  TOASYNC_ERR_DEGENERATE_GEOMETRY = 6,
  TOASYNC_ERR_ILL_CONDITIONED = 7,
  TOASYNC_ERR_SINGULAR_FIM = 8,
  TOASYNC_ERR_NOT_AVAILABLE = 9,
  TOASYNC_ERR_INTERNAL = 10
} toasync_status;

/* Library version, "major.minor.patch". */
const char* toasync_version(void);

/* Message for the most recent failure on this thread; empty string if the
 * last call succeeded. */
const char* toasync_last_error(void);

/* Short name of a status code ("ok", "invalid_argument", ...). */
const char* toasync_status_name(toasync_status status);

/* Two dual-antenna receivers: antenna j of receiver i at p_ij = {x, y} in
 * meters, antennas of each receiver `spacing` apart. */
typedef struct toasync_anchors {
  double p11[2];
  double p12[2];
  double p21[2];
  double p22[2];
  double spacing;
} toasync_anchors;

/* Biased ranges (meters) observed at one 1-based time step. */
typedef struct toasync_frame {
  double z11;
  double z12;
  double z21;
  double z22;
  uint64_t step;
} toasync_frame;

typedef struct toasync_solver_config {
  double epsilon;         /* convergence tolerance on position increment, m */
  int max_iterations;     /* Gauss-Newton passes per step */
  double condition_guard; /* bias solve held above this condition estimate */
} toasync_solver_config;

typedef struct toasync_step_result {
  double x;
  double y;
  double b1;
  double b2;
  int iterations;
  int converged;
} toasync_step_result;

typedef struct toasync_trajectory_spec {
  double start_x;
  double start_y;
  uint64_t steps;
  double dt;        /* sample interval, s */
  double speed_std; /* random-walk increment std, m/s */
  uint64_t seed;
} toasync_trajectory_spec;

typedef struct toasync_mc_spec {
  uint64_t trials;
  uint64_t noise_seed_base; /* trial m uses seed noise_seed_base + m */
  toasync_solver_config solver;
  double b1;
  double b2;
  double sigma;
} toasync_mc_spec;

/* Per-step Monte-Carlo curves. All pointers are caller-allocated arrays of
 * length trajectory steps; any pointer may be NULL to skip that column. */
typedef struct toasync_mc_report {
  double* pos_rmse;
  double* pos_crlb_root;
  double* bias1_rmse;
  double* bias1_crlb_root;
  double* bias2_rmse;
  double* bias2_crlb_root;
  uint64_t flagged_steps; /* unconverged step results across all trials */
} toasync_mc_report;

toasync_status toasync_anchors_validate(const toasync_anchors* anchors);

void toasync_default_solver_config(toasync_solver_config* out);

/* Synthesizes one biased noisy frame at the given true position and 1-based
 * step. The noise draw is a pure function of (seed, step, channel); sigma 0
 * gives exact biased ranges. */
toasync_status toasync_synthesize(double x, double y, const toasync_anchors* anchors,
                                  double b1, double b2, double sigma, uint64_t seed,
                                  uint64_t step, toasync_frame* out);

/* --- Recursive estimator ------------------------------------------------ */

typedef struct toasync_estimator toasync_estimator;

/* retain_history enables toasync_estimator_smooth at O(steps) memory. */
toasync_status toasync_estimator_create(const toasync_anchors* anchors,
                                        const toasync_solver_config* config,
                                        int retain_history, toasync_estimator** out);

void toasync_estimator_destroy(toasync_estimator* estimator);

/* Processes the next frame; frame->step must be step_count + 1. On error the
 * estimator is unchanged and remains usable. */
toasync_status toasync_estimator_step(toasync_estimator* estimator,
                                      const toasync_frame* frame,
                                      toasync_step_result* out);

uint64_t toasync_estimator_step_count(const toasync_estimator* estimator);

/* Re-solves all past positions against the current bias estimate into
 * xy_out[2*k] (x0,y0,x1,y1,...). capacity is the element count of xy_out;
 * requires capacity >= 2 * step_count and history retention enabled. */
toasync_status toasync_estimator_smooth(const toasync_estimator* estimator,
                                        double* xy_out, uint64_t capacity);

/* --- Simulation and bounds ---------------------------------------------- */

/* Random-walk trajectory into xy_out[2*steps] (x1,y1,x2,y2,...). */
toasync_status toasync_generate_trajectory(const toasync_trajectory_spec* spec,
                                           double* xy_out);

/* Estimation variance floors along a trajectory of n true positions.
 * out[3*i+0] = position CRLB (trace, m^2), out[3*i+1] / out[3*i+2] = clock
 * bias CRLBs (m^2) after step i+1. Requires sigma > 0. */
toasync_status toasync_crlb_trajectory(const double* xy, uint64_t n,
                                       const toasync_anchors* anchors, double sigma,
                                       double* out);

/* Full Monte-Carlo experiment: shared trajectory, `trials` independent noise
 * realizations, per-step RMSE and square-root CRLB curves. Deterministic for
 * fixed specs regardless of thread scheduling. */
toasync_status toasync_run_monte_carlo(const toasync_trajectory_spec* traj,
                                       const toasync_anchors* anchors,
                                       const toasync_mc_spec* mc,
                                       toasync_mc_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TOASYNC_H */
