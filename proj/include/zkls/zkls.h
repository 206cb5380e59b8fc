/* Copyright 2026 The zkls Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef ZKLS_ZKLS_H_
#define ZKLS_ZKLS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ZKLS_BUILDING_LIBRARY)
#define ZKLS_API __attribute__((visibility("default")))
#else
#define ZKLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zkls_status {
  ZKLS_OK = 0,
  ZKLS_ERR_INVALID_ARGUMENT = 1,
  ZKLS_ERR_PRECONDITION = 2,
  ZKLS_ERR_NUMERICAL = 3,
  ZKLS_ERR_IO = 4,
  ZKLS_ERR_BUFFER_TOO_SMALL = 5,
  ZKLS_ERR_INTERNAL = 6
} zkls_status;

typedef enum zkls_stability {
  ZKLS_STABLE = 0,
  ZKLS_CRITICAL = 1,
  ZKLS_UNSTABLE = 2
} zkls_stability;

typedef enum zkls_operator_kind {
  ZKLS_OP_LC_PLUS_A = 0,    /* -d_xx + c - 2Q + a */
  ZKLS_OP_DX_LC_PLUS_A = 1  /* d_x (-d_xx + c - 2Q + a) */
} zkls_operator_kind;

typedef struct zkls_operator zkls_operator;
typedef struct zkls_evans zkls_evans;
typedef struct zkls_sim zkls_sim;

ZKLS_API const char* zkls_version(void);
ZKLS_API const char* zkls_status_name(zkls_status status);
/* Message of the last failure on the calling thread; "" when none. */
ZKLS_API const char* zkls_last_error(void);

/* Line soliton Q_c and its moments int Q^p dx. */
ZKLS_API zkls_status zkls_soliton_eval(double c, const double* x, size_t n, double* q);
ZKLS_API zkls_status zkls_soliton_moment(double c, double p, double* value);

ZKLS_API zkls_status zkls_classify_threshold(double c, double L, zkls_stability* verdict,
                                             int* witness_mode, double* l_critical);

/* Fourier collocation on [-X, X) with n points. weight is the exponential
 * weight alpha of the operator conjugated by e^{alpha x}. */
ZKLS_API zkls_status zkls_operator_create(zkls_operator_kind kind, double c, double a,
                                          double half_width, int n, double weight,
                                          zkls_operator** out);
ZKLS_API void zkls_operator_destroy(zkls_operator* op);
ZKLS_API zkls_status zkls_operator_size(const zkls_operator* op, int* n);
/* count extremal eigenvalues: lowest for the self-adjoint kind, largest real
 * part first otherwise. */
ZKLS_API zkls_status zkls_operator_eigenvalues(const zkls_operator* op, int count, double* re,
                                               double* im);
/* Eigenvalues with real part above the spurious-mode filter. */
ZKLS_API zkls_status zkls_operator_unstable(const zkls_operator* op, int* count,
                                            double* leading_re, double* leading_im);

ZKLS_API zkls_status zkls_evans_create(double c, double a, zkls_evans** out);
ZKLS_API void zkls_evans_destroy(zkls_evans* ev);
ZKLS_API zkls_status zkls_evans_eval(const zkls_evans* ev, double lambda_re, double lambda_im,
                                     double* d_re, double* d_im);
ZKLS_API zkls_status zkls_evans_root(const zkls_evans* ev, double* lambda);
ZKLS_API zkls_status zkls_evans_origin_slope(double c, double* closed_form,
                                             double* finite_difference);

/* Fields are nx * ny doubles, x fastest (column-major, one column per y). */
ZKLS_API zkls_status zkls_sim_create(double c, double L, double half_width, int nx, int ny,
                                     double dt, int dealias, zkls_sim** out);
ZKLS_API void zkls_sim_destroy(zkls_sim* sim);
/* Q_c plus delta times a seeded unit-H1 random perturbation. */
ZKLS_API zkls_status zkls_sim_set_soliton(zkls_sim* sim, double delta, uint64_t seed);
ZKLS_API zkls_status zkls_sim_set_field(zkls_sim* sim, const double* u, size_t count);
ZKLS_API zkls_status zkls_sim_step(zkls_sim* sim, int steps);
ZKLS_API zkls_status zkls_sim_get_field(const zkls_sim* sim, double* u, size_t count);
ZKLS_API zkls_status zkls_sim_time(const zkls_sim* sim, double* t);
ZKLS_API zkls_status zkls_sim_invariants(const zkls_sim* sim, double* mass, double* energy,
                                         double* crest, double* orbit_distance);

/* Runs a subcommand (spectrum, evans, simulate, bifurcate, replay) with a
 * key = value config. Output files go to out_dir. The summary JSON is copied
 * into summary (NUL terminated) when capacity allows; needed receives its
 * size including the terminator. summary may be NULL. */
ZKLS_API zkls_status zkls_run(const char* command, const char* config_text, const char* out_dir,
                              char* summary, size_t capacity, size_t* needed);

/* Comma-separated config keys accepted by a subcommand. */
ZKLS_API zkls_status zkls_command_keys(const char* command, char* buffer, size_t capacity,
                                       size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* ZKLS_ZKLS_H_ */
