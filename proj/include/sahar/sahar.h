// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef SAHAR_H
#define SAHAR_H

#include <stddef.h>

#if defined(_WIN32)
#define SAHAR_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SAHAR_API __attribute__((visibility("default")))
#else
#define SAHAR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sahar_status {
  SAHAR_OK = 0,
  SAHAR_ERR_CONFIG = 1,    /* bad config, override or checkpoint/config mismatch */
  SAHAR_ERR_DATA = 2,      /* unparsable or inconsistent data */
  SAHAR_ERR_IO = 3,        /* missing files, refused overwrite, write failures */
  SAHAR_ERR_RUNTIME = 4,   /* numeric failure or anything unexpected */
  SAHAR_ERR_INTEGRITY = 5, /* corrupt checkpoint or cache */
  SAHAR_ERR_ARGUMENT = 6   /* null handle, bad buffer size */
} sahar_status;

typedef struct sahar_experiment sahar_experiment;
typedef struct sahar_model sahar_model;

/* Receives progress lines. Called on the thread running the command. */
typedef void (*sahar_log_fn)(const char* line, void* user);

SAHAR_API const char* sahar_version(void);

/* Message for the last failing call on this thread ("" after success). */
SAHAR_API const char* sahar_last_error(void);

/* JSON summary from the last successful command on this thread. Valid until
 * the next call on this thread. */
SAHAR_API const char* sahar_last_result(void);

/* Process-wide; pass NULL to silence. */
SAHAR_API void sahar_set_log_callback(sahar_log_fn fn, void* user);

/* Loads defaults, then `config_path` (may be NULL), then the "a.b=value"
 * overrides, and validates the result. */
SAHAR_API sahar_status sahar_experiment_open(const char* config_path, const char* const* overrides,
                                             size_t n_overrides, sahar_experiment** out);
SAHAR_API void sahar_experiment_free(sahar_experiment* exp);

/* Effective config as JSON; owned by the handle. */
SAHAR_API const char* sahar_experiment_config(const sahar_experiment* exp);

SAHAR_API sahar_status sahar_ingest(sahar_experiment* exp);
SAHAR_API sahar_status sahar_train(sahar_experiment* exp, int force);
/* protocol: "sample", "window" or "both"; split: "train", "val" or "test". */
SAHAR_API sahar_status sahar_eval(sahar_experiment* exp, const char* checkpoint_dir, const char* protocol,
                                  const char* split, int force);
SAHAR_API sahar_status sahar_loso(sahar_experiment* exp, int force);
SAHAR_API sahar_status sahar_sweep(sahar_experiment* exp, const size_t* sizes, size_t n_sizes, int force);
/* classes: names or indices, n_classes = 0 selects every class. */
SAHAR_API sahar_status sahar_attention_maps(sahar_experiment* exp, const char* checkpoint_dir, const char* split,
                                            const char* const* classes, size_t n_classes, int profile, int force);

/* Writes planted-signal recordings, a schema and an experiment config.
 * options_json may be NULL; keys: subjects, segments, segment_length, seed,
 * classes, channels, informative_channel. */
SAHAR_API sahar_status sahar_synth(const char* out_dir, const char* options_json, int force);

SAHAR_API sahar_status sahar_model_load(const char* checkpoint_dir, sahar_model** out);
SAHAR_API void sahar_model_free(sahar_model* model);
SAHAR_API sahar_status sahar_model_shape(const sahar_model* model, size_t* window_length, size_t* num_channels,
                                         size_t* num_classes);
/* window: T*S raw values, row-major by time. The checkpoint's normalisation is
 * applied. logits may be NULL; otherwise it must hold num_classes values.
 * sensor_scores may be NULL; otherwise it must hold T*S values. */
SAHAR_API sahar_status sahar_model_predict(const sahar_model* model, const double* window, size_t window_len,
                                           double* logits, size_t logits_len, double* sensor_scores,
                                           size_t scores_len, size_t* label);

#ifdef __cplusplus
}
#endif

#endif
