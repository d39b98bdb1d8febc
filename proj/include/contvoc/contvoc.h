// Copyright 2026 The contvoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the contvoc continuous vocoder.
 *
 * Every fallible call returns a cv_status. On failure the message of the last
 * error on the calling thread is available from cv_last_error() until the next
 * failing call on that thread. Objects are opaque handles owned by the caller
 * and released with the matching *_free function (NULL is accepted). Pointers
 * returned by accessors stay valid until the owning handle is freed or
 * modified. */

#ifndef CONTVOC_CONTVOC_H_
#define CONTVOC_CONTVOC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CONTVOC_BUILDING_LIBRARY)
#define CV_API __attribute__((visibility("default")))
#else
#define CV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cv_status {
  CV_OK = 0,
  CV_INVALID_ARGUMENT = 1,
  CV_FILE_NOT_FOUND = 2,
  CV_UNSUPPORTED_FORMAT = 3,
  CV_EMPTY_AUDIO = 4,
  CV_IO = 5,
  CV_NON_FINITE = 6,
  CV_SHAPE_MISMATCH = 7,
  CV_ZERO_VARIANCE = 8,
  CV_SIGNAL_TOO_SHORT = 9,
  CV_INCONSISTENT_ARCHIVE = 10,
  CV_DIVERGED = 11,
  CV_INTERNAL = 99
} cv_status;

typedef enum cv_mask_convention {
  CV_MASK_FIG1_OPERATIONAL = 0, /* cnm = pdd */
  CV_MASK_EQ1_LITERAL = 1       /* cnm = 1 - pdd */
} cv_mask_convention;

typedef enum cv_track {
  CV_TRACK_CONT_F0 = 0,
  CV_TRACK_MVF = 1,
  CV_TRACK_PDD = 2,
  CV_TRACK_CNM = 3
} cv_track;

typedef enum cv_cell_kind {
  CV_CELL_VANILLA_BIDIRECTIONAL = 0,
  CV_CELL_LSTM = 1,
  CV_CELL_GRU = 2
} cv_cell_kind;

typedef struct cv_waveform cv_waveform;
typedef struct cv_archive cv_archive;
typedef struct cv_ecdf cv_ecdf;
typedef struct cv_model cv_model;
typedef struct cv_train_trace cv_train_trace;

CV_API const char* cv_version(void);
CV_API const char* cv_status_string(cv_status status);
CV_API const char* cv_last_error(void);

/* ---- analysis configuration ---- */

typedef struct cv_config {
  double hop_ms;      /* 5 */
  double window_ms;   /* 25 */
  double f0_min;      /* 50 Hz */
  double f0_max;      /* 500 Hz */
  int order;          /* 24 */
  double warp;        /* 0.42 */
  double threshold;   /* 0.77 */
  int mask_convention; /* cv_mask_convention, default fig1-operational */
  int pdd_window;     /* 11 frames */
  uint64_t seed;      /* 42, noise seed for synthesis */
} cv_config;

CV_API void cv_config_init(cv_config* config);

/* ---- waveforms ---- */

CV_API cv_status cv_waveform_load(const char* path, cv_waveform** out);
CV_API cv_status cv_waveform_from_samples(const double* samples, size_t length,
                                          int sample_rate, cv_waveform** out);
/* 16-bit PCM mono. */
CV_API cv_status cv_waveform_save(const cv_waveform* wave, const char* path);
CV_API size_t cv_waveform_length(const cv_waveform* wave);
CV_API int cv_waveform_sample_rate(const cv_waveform* wave);
CV_API const double* cv_waveform_samples(const cv_waveform* wave);
CV_API void cv_waveform_free(cv_waveform* wave);

/* ---- analysis, archives, synthesis ---- */

CV_API cv_status cv_analyze(const cv_waveform* wave, const cv_config* config,
                            cv_archive** out);
/* Atomic: a failed save leaves no partial directory behind. */
CV_API cv_status cv_archive_save(const cv_archive* archive, const char* dir);
CV_API cv_status cv_archive_load(const char* dir, cv_archive** out);
CV_API void cv_archive_free(cv_archive* archive);

CV_API size_t cv_archive_frame_count(const cv_archive* archive);
CV_API int cv_archive_order(const cv_archive* archive);
CV_API int cv_archive_sample_rate(const cv_archive* archive);
CV_API int cv_archive_hop(const cv_archive* archive);
CV_API double cv_archive_threshold(const cv_archive* archive);
CV_API int cv_archive_mask_convention(const cv_archive* archive);
CV_API cv_status cv_archive_track(const cv_archive* archive, cv_track track,
                                  const double** data, size_t* length);
/* order + 1 coefficients of one frame. */
CV_API cv_status cv_archive_envelope(const cv_archive* archive, size_t frame,
                                     const double** coefficients, size_t* length);
/* Overwrites one value of a scalar track (useful to construct test archives). */
CV_API cv_status cv_archive_set_value(cv_archive* archive, cv_track track,
                                      size_t frame, double value);
/* Recomputes cnm from the stored pdd. */
CV_API cv_status cv_archive_remask(cv_archive* archive, int mask_convention,
                                   double threshold);

CV_API cv_status cv_synthesize(const cv_archive* archive, uint64_t seed,
                               cv_waveform** out);

/* ---- metrics ---- */

typedef struct cv_metric_report {
  double mcd_db;
  double f0_rmse_hz;
  double mvf_rmse_hz;
  double mvf_rmse_norm; /* divided by Nyquist */
  double corr;          /* contF0 Pearson; 1/0 for identical/different constant tracks */
  size_t frame_count;
} cv_metric_report;

CV_API cv_status cv_evaluate(const cv_archive* ref, const cv_archive* test,
                             cv_metric_report* out);
/* Row-major frames x coefficients; c0 excluded. */
CV_API cv_status cv_mcd(const double* ref, const double* test, size_t frames,
                        size_t coefficients, double* out);
CV_API cv_status cv_rmse(const double* ref, const double* test, size_t length,
                         double* out);
CV_API cv_status cv_pearson(const double* ref, const double* test, size_t length,
                            double* out);

CV_API cv_status cv_ecdf_create(const double* values, size_t length, cv_ecdf** out);
CV_API cv_status cv_ecdf_evaluate(const cv_ecdf* ecdf, double x, double* out);
/* Distinct values in ascending order with their cumulative fractions. */
CV_API size_t cv_ecdf_size(const cv_ecdf* ecdf);
CV_API cv_status cv_ecdf_point(const cv_ecdf* ecdf, size_t index, double* value,
                               double* cumulative);
CV_API void cv_ecdf_free(cv_ecdf* ecdf);

/* ---- recurrent acoustic model ---- */

CV_API cv_status cv_model_create(int cell_kind, int input_dim, int hidden_dim,
                                 int output_dim, uint64_t seed, cv_model** out);
CV_API cv_status cv_model_load(const char* path, cv_model** out);
CV_API cv_status cv_model_save(const cv_model* model, const char* path);
CV_API void cv_model_free(cv_model* model);
CV_API int cv_model_cell_kind(const cv_model* model);
CV_API int cv_model_input_dim(const cv_model* model);
CV_API int cv_model_output_dim(const cv_model* model);
/* inputs: frames columns of input_dim values (frame-major);
 * outputs: frames * output_dim values, same layout. */
CV_API cv_status cv_model_forward(const cv_model* model, const double* inputs,
                                  size_t frames, double* outputs);

typedef struct cv_toy_options {
  int cell_kind;          /* CV_CELL_VANILLA_BIDIRECTIONAL */
  int samples;            /* 4 training sequences */
  int validation_samples; /* 4 held-out sequences */
  int frames;             /* 20 */
  int input_dim;          /* 8 */
  int hidden_dim;         /* 16 */
  int output_dim;         /* 4 */
  int epochs;             /* 2000 */
  double learning_rate;   /* 0.01 */
  int batch_size;         /* 1; 0 means whole dataset */
  uint64_t seed;          /* 42 */
} cv_toy_options;

CV_API void cv_toy_options_init(cv_toy_options* options);
CV_API cv_status cv_train_toy(const cv_toy_options* options, cv_model** model,
                              cv_train_trace** trace);
CV_API size_t cv_train_trace_epochs(const cv_train_trace* trace);
CV_API double cv_train_trace_train_loss(const cv_train_trace* trace, size_t epoch);
/* NaN when no validation split was used. */
CV_API double cv_train_trace_validation_loss(const cv_train_trace* trace, size_t epoch);
CV_API void cv_train_trace_free(cv_train_trace* trace);

#ifdef __cplusplus
}
#endif

#endif /* CONTVOC_CONTVOC_H_ */
