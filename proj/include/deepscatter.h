/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 Deepscatter Contributors
 *
 * C interface to the deep scattering library: opaque handles, integer
 * status codes, and a thread-local error message. All frequencies are Hz,
 * durations seconds. Strings returned through char** are heap-allocated and
 * must be released with ds_string_free.
 */

#ifndef DEEPSCATTER_H
#define DEEPSCATTER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DS_API __declspec(dllexport)
#else
#define DS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds_status {
    DS_OK = 0,
    DS_ERR_INVALID_ARGUMENT = 1,
    DS_ERR_IO = 2,
    DS_ERR_NUMERIC = 3,
    DS_ERR_INTERNAL = 4
} ds_status;

/* Message describing the most recent failure on this thread. */
DS_API const char* ds_last_error(void);
DS_API const char* ds_version(void);
DS_API void ds_string_free(char* s);

typedef struct ds_signal ds_signal;
typedef struct ds_filterbank ds_filterbank;
typedef struct ds_scattering ds_scattering;

/* ---- signals ---- */
DS_API ds_status ds_signal_create(const double* samples, int64_t count, double rate_hz,
                                  ds_signal** out);
DS_API ds_status ds_signal_read_wav(const char* path, ds_signal** out);
DS_API ds_status ds_signal_write_wav(const ds_signal* s, const char* path);
DS_API int64_t ds_signal_length(const ds_signal* s);
DS_API double ds_signal_rate(const ds_signal* s);
DS_API ds_status ds_signal_copy_samples(const ds_signal* s, double* buffer, int64_t capacity);
DS_API void ds_signal_destroy(ds_signal* s);

/* ---- filter banks ---- */
/* fft_size 0 picks a grid adequate for the narrowest filter. */
DS_API ds_status ds_filterbank_build(int q, double t_seconds, double rate_hz, int64_t fft_size,
                                     ds_filterbank** out);
DS_API double ds_filterbank_alpha(const ds_filterbank* b);
DS_API int64_t ds_filterbank_wavelet_count(const ds_filterbank* b);
DS_API ds_status ds_filterbank_center(const ds_filterbank* b, int64_t index, double* hz_out);
DS_API ds_status ds_filterbank_describe(const ds_filterbank* b, char** json_out);
DS_API void ds_filterbank_destroy(ds_filterbank* b);

/* ---- the scattering pipeline ---- */
typedef struct ds_config {
    double t_seconds;
    int max_order;
    int q[3];
    int normalize;            /* 0/1 */
    int log_features;         /* 0/1, needs normalize */
    int freq_mode;            /* 0 off, 1 Ufreq, 2 Sfreq; needs log */
    double norm_window_seconds; /* <= 0: T */
    double epsilon;             /* < 0: scale-free default */
    double phi_fr_octaves;
    int exact;                /* unsubsampled cascade, exact energy ratios */
    uint64_t seed;
} ds_config;

DS_API void ds_config_default(ds_config* cfg);

DS_API ds_status ds_scatter(const ds_signal* x, const ds_config* cfg, ds_scattering** out);

/* The exported feature matrix is frame-major; columns are in the canonical
 * order (order-major, then lambda1, lambda2, quefrency). Absent coordinates
 * read -1. */
DS_API int64_t ds_scattering_frame_count(const ds_scattering* s);
DS_API int64_t ds_scattering_column_count(const ds_scattering* s);
DS_API ds_status ds_scattering_column_info(const ds_scattering* s, int64_t column, int* order,
                                           double* lambda1_hz, double* lambda2_hz,
                                           double* quefrency);
DS_API ds_status ds_scattering_column_values(const ds_scattering* s, int64_t column,
                                             double* buffer, int64_t capacity);
DS_API ds_status ds_scattering_manifest(const ds_scattering* s, char** json_out);
/* format: "csv", "jsonl" or "binary" */
DS_API ds_status ds_scattering_export(const ds_scattering* s, const char* format,
                                      const char* path);
/* Approximate inversion (max_order 1 or 2). report_json_out may be NULL. */
DS_API ds_status ds_scattering_invert(const ds_scattering* s, int max_order, int rl_iterations,
                                      int gl_iterations, uint64_t seed, ds_signal** signal_out,
                                      char** report_json_out);
DS_API void ds_scattering_destroy(ds_scattering* s);

/* ---- synthetic signals and oracle comparisons ---- */
DS_API ds_status ds_synth_two_tone(double f1_hz, double f2_hz, double a1, double a2,
                                   double duration_s, double rate_hz, ds_signal** out);
/* excitation: 0 pulse train (uses pitch_hz), 1 white noise (uses seed). */
DS_API ds_status ds_synth_source_filter(int excitation, double pitch_hz, uint64_t seed,
                                        double resonance_hz, double tremolo_hz,
                                        double tremolo_depth, double duration_s, double rate_hz,
                                        ds_signal** out);
/* Runs the pipeline on a two-tone clip and compares the second-order profile
 * against the closed-form interference prediction. */
DS_API ds_status ds_synth_interference_report(double f1_hz, double f2_hz, double a1, double a2,
                                              double duration_s, double rate_hz, double t_seconds,
                                              int q1, int q2, char** json_out);
/* Same for the amplitude-modulation prediction on a tremolo source-filter
 * clip (voiced when excitation is 0). */
DS_API ds_status ds_synth_am_report(int excitation, double pitch_hz, uint64_t seed,
                                    double tremolo_hz, double tremolo_depth, double duration_s,
                                    double rate_hz, double t_seconds, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* DEEPSCATTER_H */
