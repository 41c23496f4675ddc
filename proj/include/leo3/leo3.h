/* SPDX-License-Identifier: Apache-2.0 */
#ifndef LEO3_H
#define LEO3_H

/*
 * C API for the leo3 simulator: three-level open quantum systems under
 * leakage-elimination pulse control in a non-Markovian environment.
 *
 * All entry points are thread-compatible (distinct handles may be used from
 * distinct threads). Functions return leo3_status; rich error text for the
 * most recent failure on a handle is available via leo3_sim_last_error, and
 * creation failures via the out-parameter of leo3_sim_create.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LEO3_API __declspec(dllexport)
#else
#define LEO3_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum leo3_status {
    LEO3_OK = 0,
    LEO3_ERR_INVALID_ARG = 1,  /* bad pointer, unknown command, ... */
    LEO3_ERR_VALIDATION = 2,   /* config or domain validation failed */
    LEO3_ERR_RUNTIME = 3,      /* integration failure, blow-up, I/O */
} leo3_status;

/* Opaque simulator configured from a JSON document. */
typedef struct leo3_sim leo3_sim;

/* Opaque fidelity-vs-time curve. */
typedef struct leo3_curve leo3_curve;

/* Library and config-schema versions (static strings, do not free). */
LEO3_API const char* leo3_version(void);
LEO3_API int leo3_schema_version(void);

/*
 * Validates a JSON config without building a simulator. Returns LEO3_OK or
 * LEO3_ERR_VALIDATION; on failure *errors_out (if non-NULL) receives a
 * newline-separated list of every violation, to be freed with
 * leo3_string_free.
 */
LEO3_API leo3_status leo3_config_validate_json(const char* json_text, char** errors_out);

/*
 * Builds a simulator from a JSON config. Returns NULL on failure and, when
 * error_out is non-NULL, stores the failure text (free with
 * leo3_string_free).
 */
LEO3_API leo3_sim* leo3_sim_create(const char* json_text, char** error_out);
LEO3_API void leo3_sim_destroy(leo3_sim* sim);

/* Text of the most recent failure on this handle (owned by the handle). */
LEO3_API const char* leo3_sim_last_error(const leo3_sim* sim);

/* Runtime overrides, mirroring the CLI flags. */
LEO3_API leo3_status leo3_sim_override_seed(leo3_sim* sim, uint64_t seed);
LEO3_API leo3_status leo3_sim_override_dt(leo3_sim* sim, double dt);
LEO3_API leo3_status leo3_sim_override_threads(leo3_sim* sim, int threads);

/*
 * Runs one command (simulate, diagram, scan-phi0, scan-ratio,
 * random-ensemble, noisy-ensemble, equivalence-check, validate, version),
 * writing this command's artifacts into out_dir. When report_out is
 * non-NULL it receives the human-readable summary (free with
 * leo3_string_free). Exit status maps to leo3_status.
 */
LEO3_API leo3_status leo3_sim_dispatch(leo3_sim* sim, const char* command, const char* out_dir,
                                       char** report_out);

/*
 * Computes the fidelity curve for the configured scenario (master equation
 * or trajectory ensemble per the config) without touching the filesystem.
 */
LEO3_API leo3_status leo3_sim_run_fidelity(leo3_sim* sim, leo3_curve** curve_out);

LEO3_API size_t leo3_curve_length(const leo3_curve* curve);
/* stderr_out receives 0 for deterministic runs. Any out-pointer may be NULL. */
LEO3_API leo3_status leo3_curve_point(const leo3_curve* curve, size_t index, double* t_out,
                                      double* fidelity_out, double* stderr_out);
LEO3_API void leo3_curve_destroy(leo3_curve* curve);

/*
 * Nitrogen-vacancy level preset: gap (GHz) between the m_s = 0 and m_s = -1
 * sublevels under an axial field B_z (mT); *warn_crossing_out is set to 1
 * when the gap closes (B_z >= 28.8 mT).
 */
LEO3_API leo3_status leo3_nv_level_gap(double b_z_mt, double* gap_ghz_out,
                                       int* warn_crossing_out);

LEO3_API void leo3_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LEO3_H */
