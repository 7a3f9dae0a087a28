// SPDX-License-Identifier: Apache-2.0
//
// thzqkd — secret key rates for continuous-variable MDI QKD over THz MIMO links
// Copyright (C) 2026 thzqkd contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Public C interface of the thzqkd shared library.
//
// Conventions:
//   - All variances are in shot-noise units (vacuum = 1), distances in meters,
//     atmospheric loss in dB/km, frequencies in Hz, angles in radians.
//   - Every function returns a thzqkd_status; THZQKD_OK is 0. On failure a
//     human-readable message is available from thzqkd_last_error(), which is
//     thread-local and valid until the next failing call on the same thread.
//   - Objects are opaque handles created and destroyed by this library.
//     Passing NULL where a handle is required yields THZQKD_ERR_NULL_ARGUMENT.

#ifndef THZQKD_H
#define THZQKD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------ */
/* Status codes and error reporting                                    */
/* ------------------------------------------------------------------ */

typedef enum thzqkd_status {
    THZQKD_OK = 0,
    THZQKD_ERR_NULL_ARGUMENT = 1,  /* a required pointer was NULL            */
    THZQKD_ERR_INVALID_CONFIG = 2, /* a config invariant is violated         */
    THZQKD_ERR_DOMAIN = 3,         /* numeric argument outside its domain    */
    THZQKD_ERR_UNKNOWN_KEY = 4,    /* unrecognized config key or preset id   */
    THZQKD_ERR_IO = 5,             /* file could not be read or written      */
    THZQKD_ERR_PARSE = 6,          /* config file syntax error               */
    THZQKD_ERR_INFEASIBLE = 7,     /* e.g. non-positive rate at zero range   */
    THZQKD_ERR_INDEX = 8,          /* out-of-range index                     */
    THZQKD_ERR_INTERNAL = 9        /* unexpected internal failure            */
} thzqkd_status;

/* Library version string, e.g. "1.0.0". Never fails. */
const char* thzqkd_version(void);

/* Thread-local message describing the most recent failure on this thread.
 * Returns an empty string if no failure has occurred. */
const char* thzqkd_last_error(void);

/* Short name of a status code, e.g. "invalid-config". */
const char* thzqkd_status_name(thzqkd_status s);

/* ------------------------------------------------------------------ */
/* Configuration                                                       */
/* ------------------------------------------------------------------ */

typedef struct thzqkd_config thzqkd_config;

/* New config holding the documented defaults (100 GHz, 300 K, SISO,
 * V_M = 1e5, W = 1, eta = 1, beta = 1, G_a = 30, 0.5-wavelength spacing,
 * delta = 0.6 dB/km, M = 2e6 with N = M/2, smoothing/PA epsilons 1e-10,
 * z = 6.5, dim_hx = 2). */
thzqkd_status thzqkd_config_create(thzqkd_config** out);

/* Symmetric-scenario constructor: n antennas on every array, L = n paths,
 * equal legs distance_ab_m/2, carrier frequency_hz, atmospheric loss
 * delta_db_per_km; every other field at its default. */
thzqkd_status thzqkd_config_create_symmetric(int n_antennas,
                                             double frequency_hz,
                                             double distance_ab_m,
                                             double delta_db_per_km,
                                             thzqkd_config** out);

/* Parse a key=value config file (see README for the schema). */
thzqkd_status thzqkd_config_load(const char* path, thzqkd_config** out);

void thzqkd_config_free(thzqkd_config* cfg);

/* Set/get a field by its schema name (integer fields take/return integral
 * doubles). Unknown names yield THZQKD_ERR_UNKNOWN_KEY. Setting a value does
 * not validate it; call thzqkd_config_validate before use. */
thzqkd_status thzqkd_config_set(thzqkd_config* cfg, const char* key, double value);
thzqkd_status thzqkd_config_get(const thzqkd_config* cfg, const char* key, double* value);

/* Check every invariant; on failure the message names the offending field. */
thzqkd_status thzqkd_config_validate(const thzqkd_config* cfg);

/* ------------------------------------------------------------------ */
/* Physics helpers                                                     */
/* ------------------------------------------------------------------ */

/* Mean thermal photon number nbar = 1/(exp(h f / (k_B T)) - 1). */
thzqkd_status thzqkd_thermal_occupation(double frequency_hz, double temperature_k,
                                        double* nbar);

/* Free-space + atmospheric power gain
 * gamma = G_a^2 N_R N_T (lambda/(4 pi d))^2 10^(-delta (d/1000)/10). */
thzqkd_status thzqkd_path_loss(double frequency_hz, double distance_m,
                               double delta_db_per_km, int n_rx, int n_tx,
                               double antenna_element_gain, double* gamma);

/* ------------------------------------------------------------------ */
/* Parallel channels                                                   */
/* ------------------------------------------------------------------ */

typedef struct thzqkd_channels thzqkd_channels;

/* Transmittances and ancilla variances of one parallel channel. */
typedef struct thzqkd_channel_pair {
    double t_a; /* T_A in [0,1]  */
    double t_b; /* T_B in [0,1]  */
    double w_a; /* W_A >= 1, SNU */
    double w_b; /* W_B >= 1, SNU */
} thzqkd_channel_pair;

/* Idealized mode: every channel carries T = min(gamma, 1) of its link;
 * r = min over links of min(N_T, N_R, L). Figure-reproduction mode. */
thzqkd_status thzqkd_channels_idealized(const thzqkd_config* cfg,
                                        thzqkd_channels** out);

/* Realized mode: draw both MIMO matrices from the multipath model with the
 * given seed, decompose, pair singular channels by index. */
thzqkd_status thzqkd_channels_realized(const thzqkd_config* cfg, uint64_t seed,
                                       thzqkd_channels** out);

void thzqkd_channels_free(thzqkd_channels* ch);

thzqkd_status thzqkd_channels_count(const thzqkd_channels* ch, int* r);
thzqkd_status thzqkd_channels_clamped(const thzqkd_channels* ch, int* count);
thzqkd_status thzqkd_channels_get(const thzqkd_channels* ch, int index,
                                  thzqkd_channel_pair* out);

/* Synthesize one link's channel matrix (link 0 = Alice-Charlie, 1 = Bob-
 * Charlie) and write it to a text file: a "rows cols" header line, then one
 * line per row of "re,im" pairs separated by single spaces (row-major). */
thzqkd_status thzqkd_channel_matrix_export(const thzqkd_config* cfg, int link,
                                           uint64_t seed, const char* path);

/* ------------------------------------------------------------------ */
/* Key-rate reports                                                    */
/* ------------------------------------------------------------------ */

typedef struct thzqkd_report thzqkd_report;

/* Full per-channel breakdown. Finite-size fields are zero in asymptotic
 * reports; `rate` is the asymptotic per-channel rate or, in finite reports,
 * the bounded-parameter rate before the bracket is applied. */
typedef struct thzqkd_channel_rate {
    double t_a, t_b;         /* link transmittances                        */
    double t_eq;             /* equivalent one-way transmittance T_i       */
    double eps_eq;           /* equivalent excess noise eps_i              */
    double w_hat;            /* equivalent one-way noise variance          */
    double s_ab;             /* reconcilable mutual information (bits)     */
    double i_be;             /* Holevo bound (bits)                        */
    double lambda1, lambda2, lambda3, lambda4; /* symplectic eigenvalues   */
    double rate;             /* beta*s_ab - i_be (bits per channel use)    */
    int truncated;           /* 1 if T_i was truncated at 1 - 1e-12        */
    /* finite-size extras (zero in asymptotic mode): */
    double t_low_a, t_low_b; /* worst-case transmittances                  */
    double w_up_a, w_up_b;   /* worst-case ancilla variances               */
    double bracket;          /* rate - Delta(N)                            */
    double contribution;     /* (N/M)*bracket if the prefactor is on       */
    int bounds_clamped;      /* 1 if a T_L hit the zero floor              */
} thzqkd_channel_rate;

typedef struct thzqkd_report_info {
    double total_rate;       /* sum over channels (bits per channel use)   */
    int r;                   /* channel count                              */
    int clamp_count;         /* channels whose T was clamped to [0,1]      */
    int finite;              /* 1 for finite-size reports                  */
    double delta_n;          /* privacy-amplification penalty (finite)     */
    int prefactor;           /* 1 if the N/M prefactor was applied         */
} thzqkd_report_info;

/* Asymptotic MIMO key rate over a channel set. */
thzqkd_status thzqkd_rate_asymptotic(const thzqkd_config* cfg,
                                     const thzqkd_channels* ch,
                                     thzqkd_report** out);

/* Finite-size MIMO key rate; include_prefactor selects whether the N/M
 * factor multiplies each bracket (1 matches the printed rate expression). */
thzqkd_status thzqkd_rate_finite(const thzqkd_config* cfg,
                                 const thzqkd_channels* ch,
                                 int include_prefactor,
                                 thzqkd_report** out);

void thzqkd_report_free(thzqkd_report* rep);

thzqkd_status thzqkd_report_info_get(const thzqkd_report* rep,
                                     thzqkd_report_info* out);
thzqkd_status thzqkd_report_channel(const thzqkd_report* rep, int index,
                                    thzqkd_channel_rate* out);

/* Serialize a report (format 0 = CSV, 1 = JSON) to a file, or to stdout when
 * path is NULL. CSV holds one row per channel; JSON adds the totals. */
thzqkd_status thzqkd_report_write(const thzqkd_report* rep, const char* path,
                                  int format);

/* ------------------------------------------------------------------ */
/* Driver: max distance, sweeps, presets                               */
/* ------------------------------------------------------------------ */

/* Largest d_AB with positive total rate (idealized channels), by bisection.
 * mode 0 = asymptotic, 1 = finite. Reports the bracketing rates just inside
 * and outside the boundary. Errors with THZQKD_ERR_INFEASIBLE when the rate
 * is non-positive already at d -> 0+. */
thzqkd_status thzqkd_max_distance(const thzqkd_config* cfg, int mode,
                                  double tolerance_m, double* distance_m,
                                  double* rate_inside, double* rate_outside);

typedef struct thzqkd_sweep thzqkd_sweep;

typedef enum thzqkd_sweep_axis {
    THZQKD_AXIS_DISTANCE = 0,           /* total d_AB in meters            */
    THZQKD_AXIS_FREQUENCY = 1,          /* carrier in Hz                   */
    THZQKD_AXIS_DETECTOR_EFFICIENCY = 2,/* both detectors                  */
    THZQKD_AXIS_BLOCK_SIZE = 3,         /* M, with N = M/2 (finite mode)   */
    THZQKD_AXIS_ANTENNAS = 4            /* n on all arrays, L = n          */
} thzqkd_sweep_axis;

typedef struct thzqkd_sweep_point {
    double axis_value;
    double total_rate;
    double channel1_rate;
    int r;
    int clamp_count;
    int feasible;            /* 1 iff total_rate > 0                       */
    int error;               /* thzqkd_status for this point (0 = OK)      */
} thzqkd_sweep_point;

/* Evaluate the rate over a strictly increasing grid. mode/channel selection
 * as in thzqkd_max_distance / channels_realized; seed is used only with
 * realized channels (one independent draw per grid point). Per-point errors
 * are recorded in the row and do not abort the sweep. */
thzqkd_status thzqkd_sweep_run(const thzqkd_config* cfg, thzqkd_sweep_axis axis,
                               const double* grid, size_t grid_len, int mode,
                               int realized, uint64_t seed, thzqkd_sweep** out);

void thzqkd_sweep_free(thzqkd_sweep* sw);

thzqkd_status thzqkd_sweep_count(const thzqkd_sweep* sw, size_t* n);
thzqkd_status thzqkd_sweep_point_get(const thzqkd_sweep* sw, size_t index,
                                     thzqkd_sweep_point* out);

/* Error message of a failed grid point; empty string when the point
 * evaluated cleanly, NULL for a NULL handle or out-of-range index. */
const char* thzqkd_sweep_point_error(const thzqkd_sweep* sw, size_t index);

/* Serialize a sweep (format 0 = CSV, 1 = JSON); path NULL writes stdout. */
thzqkd_status thzqkd_sweep_write(const thzqkd_sweep* sw, const char* path,
                                 int format);

/* Space-separated list of preset study identifiers. Never fails. */
const char* thzqkd_reproduce_ids(void);

/* Emit the data series of a preset study (or "all") into out_dir, one file
 * per study, named <id>.csv or <id>.json. */
thzqkd_status thzqkd_reproduce(const char* id, const char* out_dir, int format);

/* ------------------------------------------------------------------ */
/* Estimator Monte Carlo                                               */
/* ------------------------------------------------------------------ */

typedef struct thzqkd_mle_result {
    double t_hat;        /* MLE of t' = sqrt(T)                            */
    double sigma2_hat;   /* MLE of sigma'^2 (divides by k)                 */
    double t_ci_lo, t_ci_hi;           /* t' confidence interval           */
    double sigma2_ci_lo, sigma2_ci_hi; /* sigma'^2 confidence interval     */
} thzqkd_mle_result;

/* Draw one batch (x ~ N(0, v_mod), y = t x + z, z ~ N(0, sigma2)) and run
 * the maximum-likelihood estimators with z_pe-sigma confidence intervals. */
thzqkd_status thzqkd_estimator_mle(double t, double sigma2, double v_mod,
                                   size_t k, double z_pe, uint64_t seed,
                                   thzqkd_mle_result* out);

typedef struct thzqkd_estimator_stats {
    double mean_t_hat, var_t_hat;   /* empirical across trials             */
    double theory_var_t_hat;        /* sigma2/(k v_mod)                    */
    double mean_chi, var_chi;       /* k sigma2_hat / sigma2 statistic     */
    double theory_mean_chi;         /* k - 1                               */
    double theory_var_chi;          /* 2(k - 1)                            */
    double se_mean_chi;             /* standard error of mean_chi          */
    int pass;                       /* 1 if within 5 SE / documented bands */
} thzqkd_estimator_stats;

/* Monte Carlo check of the estimator sampling laws over `trials` batches. */
thzqkd_status thzqkd_estimator_distribution(double t, double sigma2,
                                            double v_mod, size_t k,
                                            size_t trials, uint64_t seed,
                                            thzqkd_estimator_stats* out);

/* Per-trial CSV dump (columns: trial,t_hat,sigma2_hat); path NULL = stdout. */
thzqkd_status thzqkd_estimator_dump(double t, double sigma2, double v_mod,
                                    size_t k, size_t trials, uint64_t seed,
                                    const char* path);

typedef struct thzqkd_bounds {
    double t_low;   /* worst-case transmittance T_L                        */
    double eps_up;  /* worst-case excess noise                             */
    double w_up;    /* worst-case ancilla variance                         */
    int clamped;    /* 1 if the transmittance bound hit the zero floor     */
} thzqkd_bounds;

/* Sample-derived worst-case channel bounds from one simulated batch. */
thzqkd_status thzqkd_estimator_bounds(double t, double sigma2, double v_mod,
                                      size_t k, double z_pe, uint64_t seed,
                                      thzqkd_bounds* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* THZQKD_H */
