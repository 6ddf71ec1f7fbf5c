/*
 * Copyright 2026 The spinsync Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * Stable C interface to the spinsync simulator.
 *
 * Handles are opaque and owned by the caller; every *_create / *_from_* /
 * simulate call must be paired with the matching *_destroy. Functions return
 * a spinsync_status; on anything but SPINSYNC_OK a human-readable message is
 * available from spinsync_last_error() on the calling thread.
 *
 * String outputs use the (buf, cap, needed) convention: `needed` receives the
 * length including the terminating NUL; if cap is too small the call returns
 * SPINSYNC_E_BUFFER and writes nothing. Pass buf = NULL, cap = 0 to query.
 */

#ifndef SPINSYNC_SPINSYNC_H_
#define SPINSYNC_SPINSYNC_H_

#include <stddef.h>

#if defined(_WIN32)
#define SPINSYNC_API __declspec(dllexport)
#else
#define SPINSYNC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spinsync_status {
  SPINSYNC_OK = 0,
  SPINSYNC_E_INVALID_CONFIG = 1,
  SPINSYNC_E_SINGULAR_COUPLING = 2,
  SPINSYNC_E_NON_FINITE = 3,
  SPINSYNC_E_HP_BREAKDOWN = 4,
  SPINSYNC_E_PSD_VIOLATION = 5,
  SPINSYNC_E_DEGENERATE_ORBIT = 6,
  SPINSYNC_E_DEGENERATE_COVARIANCE = 7,
  SPINSYNC_E_EMPTY_WINDOW = 8,
  SPINSYNC_E_IO = 9,
  SPINSYNC_E_INVALID_ARGUMENT = 10,
  SPINSYNC_E_BUFFER = 11,
  SPINSYNC_E_INTERNAL = 12
} spinsync_status;

typedef struct spinsync_config spinsync_config;
typedef struct spinsync_result spinsync_result;

typedef struct spinsync_summary {
  int status; /* spinsync_status of the run itself */
  double failure_time; /* NaN when the run completed */
  double Sq_bar;
  double Sq_phi_bar;
  double phi;
  int phi_estimated;
  double amplitude[2];
  double period[2];
  double min_eigenvalue;
  double min_mode_det;
  long long steps;
  size_t hp_warnings;
  size_t records;
  double wall_seconds;
} spinsync_summary;

typedef struct spinsync_record {
  double t;
  double q1, p1, q2, p2;
  double C[10]; /* C11 C12 C13 C14 C22 C23 C24 C33 C34 C44 */
  double Sq;
  double Sq_phi;
  int sc_perfect; /* Sc is NaN when set */
  double Sc;
  double Sc_error;
} spinsync_record;

SPINSYNC_API const char* spinsync_version(void);
SPINSYNC_API const char* spinsync_status_name(spinsync_status status);
SPINSYNC_API const char* spinsync_last_error(void);

/* Configuration. */
SPINSYNC_API spinsync_status spinsync_config_create(spinsync_config** out);
SPINSYNC_API spinsync_status spinsync_config_from_preset(const char* name, spinsync_config** out);
/* Keys present in the file override the values already in `config`. */
SPINSYNC_API spinsync_status spinsync_config_load_file(spinsync_config* config, const char* path);
SPINSYNC_API spinsync_status spinsync_config_parse(spinsync_config* config, const char* text);
SPINSYNC_API spinsync_status spinsync_config_set(spinsync_config* config, const char* key,
                                                 const char* value);
SPINSYNC_API spinsync_status spinsync_config_get(const spinsync_config* config, const char* key,
                                                 char* buf, size_t cap, size_t* needed);
SPINSYNC_API spinsync_status spinsync_config_serialize(const spinsync_config* config, char* buf,
                                                       size_t cap, size_t* needed);
SPINSYNC_API void spinsync_config_destroy(spinsync_config* config);

/* Runs. The return value is the run status; `*out` is set whenever a result
 * exists (numerical failures still carry partial records), and is NULL on
 * configuration or argument errors. */
SPINSYNC_API spinsync_status spinsync_simulate(const spinsync_config* config,
                                               spinsync_result** out);
/* simulate + trajectory.csv, summary.txt, manifest.txt in out_dir. */
SPINSYNC_API spinsync_status spinsync_run_scenario(const spinsync_config* config,
                                                   const char* out_dir, spinsync_result** out);
SPINSYNC_API spinsync_status spinsync_result_write(const spinsync_result* result,
                                                   const char* out_dir);
SPINSYNC_API spinsync_status spinsync_result_summary(const spinsync_result* result,
                                                     spinsync_summary* out);
SPINSYNC_API const char* spinsync_result_message(const spinsync_result* result);
SPINSYNC_API spinsync_status spinsync_result_record(const spinsync_result* result, size_t index,
                                                    spinsync_record* out);
SPINSYNC_API void spinsync_result_destroy(spinsync_result* result);

/* Thermal sweep: one independent run per n_m value. Sq_bar_out and
 * status_out (each of length count, either may be NULL) receive per-point
 * results; failed points have NaN Sq_bar. Writes sweep.csv and manifest.txt
 * when out_dir is non-NULL. Returns SPINSYNC_OK unless the inputs are
 * invalid or files cannot be written. */
SPINSYNC_API spinsync_status spinsync_run_sweep(const spinsync_config* config,
                                                const double* n_m_values, size_t count,
                                                const char* out_dir, double* Sq_bar_out,
                                                int* status_out);

/* Runs the invariant suite; *passed is 1 when every check passed (or is a
 * documented expected difference under strict_paper). The report has one
 * line per check. */
SPINSYNC_API spinsync_status spinsync_selftest(int strict_paper, int* passed, char* report,
                                               size_t cap, size_t* needed);

/* Numeric building blocks. C is a row-major 4x4 covariance matrix. */
SPINSYNC_API spinsync_status spinsync_quantum_sync_phi(const double C[16], double phi,
                                                       double* out);
SPINSYNC_API spinsync_status spinsync_derive_constants(const spinsync_config* config,
                                                       double* B1, double* B2, double* theta);

#ifdef __cplusplus
}
#endif

#endif /* SPINSYNC_SPINSYNC_H_ */
