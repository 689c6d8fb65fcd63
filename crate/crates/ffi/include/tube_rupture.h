#ifndef TUBE_RUPTURE_H
#define TUBE_RUPTURE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  TR_DRIVER_SECOND_ORDER = 0,
  TR_DRIVER_EXACT = 1,
} TrDriver;

typedef enum {
  TR_STATUS_OK = 0,
  TR_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Outside the domain of the closed-form prediction (ε = 0, z0 = 0, no extremum).
   */
  TR_STATUS_ANALYTIC_DOMAIN = 2,
  TR_STATUS_NUMERIC_FAILURE = 3,
  TR_STATUS_NULL_POINTER = 4,
  TR_STATUS_PANIC = 5,
} TrStatus;

typedef enum {
  TR_TERMINATION_REACHED_END = 0,
  TR_TERMINATION_BLOW_UP = 1,
  TR_TERMINATION_STEP_COLLAPSE = 2,
  TR_TERMINATION_DRIVER_NON_POSITIVE = 3,
} TrTermination;

/**
 * Opaque integration result.
 */
typedef struct TrTrajectory TrTrajectory;

typedef struct {
  double rel_tol;
  double abs_tol;
  double h_init;
  double h_min;
  double blowup_threshold;
  TrDriver driver;
} TrIntegratorConfig;

typedef struct {
  double y0;
  double eps;
  double z0;
} TrParams;

typedef struct {
  double c_const;
  double phi_crit;
  double n_crit;
  double tau_rupt;
  double r_star;
  double z_at_rupture;
  double p_at_rupture;
  /**
   * `y0 (y0 − C^{1/3})`; the prediction is inside its validity region when below 1.
   */
  double validity_value;
  bool valid;
} TrPrediction;

typedef struct {
  int64_t n;
  double tau;
  double y;
  double yp;
  double ypp;
  double z;
  double p;
} TrSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *tr_version(void);

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next library call on the same thread.
 */
const char *tr_last_error_message(void);

/**
 * # Safety
 * `out` must be null or point to writable memory for one `TrIntegratorConfig`.
 */
TrStatus tr_default_config(TrIntegratorConfig *out);

/**
 * Closed-form rupture prediction.
 *
 * # Safety
 * `params` must be null or valid for reads; `out` must be null or valid for writes.
 */
TrStatus tr_predict(const TrParams *params, TrPrediction *out);

/**
 * # Safety
 * `params` must be null or valid for reads; `out` must be null or valid for writes.
 */
TrStatus tr_tau_rupt_closed(const TrParams *params, double *out);

/**
 * Sampled invariant `I_s(z, p, n)`.
 */
double tr_invariant_sampled(double z, double p, int64_t n, double y0, double eps);

/**
 * Integrate from the initial condition to `tau_end`. `config` may be null for
 * defaults. On success `*out` owns a handle to free with `tr_trajectory_free`.
 *
 * # Safety
 * `params` must be valid for reads, `config` null or valid for reads, `out`
 * valid for writes.
 */
TrStatus tr_integrate(const TrParams *params,
                      const TrIntegratorConfig *config,
                      double tau_end,
                      TrTrajectory **out);

/**
 * # Safety
 * `traj` must come from `tr_integrate`; the out pointers may be null.
 */
TrStatus tr_trajectory_termination(const TrTrajectory *traj, TrTermination *kind, double *tau);

/**
 * Number of recorded grid samples `τ = nπ` (0 for a null handle).
 *
 * # Safety
 * `traj` must be null or come from `tr_integrate`.
 */
size_t tr_trajectory_sample_count(const TrTrajectory *traj);

/**
 * # Safety
 * `traj` must come from `tr_integrate`; `out` must be valid for writes.
 */
TrStatus tr_trajectory_sample(const TrTrajectory *traj, size_t index, TrSample *out);

/**
 * # Safety
 * `traj` must be null or a handle from `tr_integrate` not yet freed.
 */
void tr_trajectory_free(TrTrajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TUBE_RUPTURE_H */
