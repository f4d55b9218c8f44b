// Copyright 2026 The rfppg Authors
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

/* C interface to the rfppg library. All functions return an rfppg_status;
 * on failure rfppg_last_error() holds a message for the calling thread. */

#ifndef RFPPG_RFPPG_H
#define RFPPG_RFPPG_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(RFPPG_BUILDING_LIBRARY)
#define RFPPG_API __declspec(dllexport)
#else
#define RFPPG_API __declspec(dllimport)
#endif
#else
#define RFPPG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rfppg_status {
  RFPPG_OK = 0,
  RFPPG_INVALID_ARGUMENT = 1,
  RFPPG_EMPTY_INPUT = 2,
  RFPPG_DEGENERATE_VARIANCE = 3,
  RFPPG_SEGMENT_TOO_LONG = 4,
  RFPPG_LENGTH_MISMATCH = 5,
  RFPPG_SHAPE_MISMATCH = 6,
  RFPPG_RATE_MISMATCH = 7,
  RFPPG_INVALID_RANGE = 8,
  RFPPG_INPUT_TOO_SHORT = 9,
  RFPPG_NYQUIST_VIOLATION = 10,
  RFPPG_SINGULAR_SYSTEM = 11,
  RFPPG_EMPTY_DATASET = 12,
  RFPPG_DIVERGED_LOSS = 13,
  RFPPG_EMPTY_RESULT = 14,
  RFPPG_IO_ERROR = 15,
  RFPPG_FORMAT_ERROR = 16,
  RFPPG_MODEL_MISMATCH = 17,
  RFPPG_CONFIG_ERROR = 18,
  RFPPG_INTERNAL_ERROR = 99
} rfppg_status;

typedef struct rfppg_config rfppg_config;
typedef struct rfppg_model rfppg_model;
typedef struct rfppg_report rfppg_report;

/* Progress messages; may be NULL. Calls are serialized. */
typedef void (*rfppg_log_fn)(const char* message, void* user);

RFPPG_API const char* rfppg_version(void);
RFPPG_API const char* rfppg_status_name(rfppg_status status);
RFPPG_API const char* rfppg_last_error(void);

/* Samples per segment and the processed sample rate. */
RFPPG_API size_t rfppg_segment_length(void);
RFPPG_API double rfppg_processed_rate(void);

/* Worker count from RFPPG_WORKERS or the hardware. */
RFPPG_API rfppg_status rfppg_worker_count(size_t* out);

RFPPG_API rfppg_status rfppg_config_new(rfppg_config** out);
/* key=value file; unknown keys and bad values are rejected. */
RFPPG_API rfppg_status rfppg_config_load(const char* path, rfppg_config** out);
RFPPG_API rfppg_status rfppg_config_set(rfppg_config* cfg, const char* key, const char* value);
RFPPG_API void rfppg_config_free(rfppg_config* cfg);

RFPPG_API rfppg_status rfppg_simulate(const rfppg_config* cfg, const char* out_dir,
                                      rfppg_log_fn log, void* user);
RFPPG_API rfppg_status rfppg_preprocess(const rfppg_config* cfg, const char* dataset_dir,
                                        const char* out_file, size_t* pair_count,
                                        rfppg_log_fn log, void* user);
/* model_kind is "ridge" or "mlp"; NULL uses the config's model.kind. */
RFPPG_API rfppg_status rfppg_train(const rfppg_config* cfg, const char* pairs_file,
                                   const char* model_kind, const char* out_model,
                                   rfppg_log_fn log, void* user);
/* report may be NULL. */
RFPPG_API rfppg_status rfppg_eval(const rfppg_config* cfg, const char* pairs_file,
                                  const char* model_file, const char* report_dir,
                                  rfppg_report** report, rfppg_log_fn log, void* user);
RFPPG_API rfppg_status rfppg_translate(const rfppg_config* cfg, const char* capture_file,
                                       const char* model_file, const char* out_ppg,
                                       double* duration_s, rfppg_log_fn log, void* user);

RFPPG_API rfppg_status rfppg_model_load(const char* path, rfppg_model** out);
RFPPG_API const char* rfppg_model_kind(const rfppg_model* model);
/* One processed radio segment of rfppg_segment_length() samples in, the
 * synthetic PPG segment out. */
RFPPG_API rfppg_status rfppg_model_translate(const rfppg_model* model, const double* radio,
                                             size_t n, double* out);
RFPPG_API void rfppg_model_free(rfppg_model* model);

/* split: "train" or "test". metric: n, mae_time, mae_dct, pearson_median,
 * pearson_q1, pearson_q3, hr_err_median, hr_n. NaN when undefined. */
RFPPG_API rfppg_status rfppg_report_metric(const rfppg_report* report, const char* split,
                                           const char* metric, double* out);
RFPPG_API void rfppg_report_free(rfppg_report* report);

#ifdef __cplusplus
}
#endif

#endif /* RFPPG_RFPPG_H */
