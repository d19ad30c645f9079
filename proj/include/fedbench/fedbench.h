/*
 * Copyright 2026 The fedbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDBENCH_FEDBENCH_H_
#define FEDBENCH_FEDBENCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FEDBENCH_BUILDING_LIBRARY)
#define FEDBENCH_API __declspec(dllexport)
#else
#define FEDBENCH_API __declspec(dllimport)
#endif
#else
#define FEDBENCH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; details are available from
 * fb_last_error() on the calling thread until the next call. */
typedef enum fb_status {
  FB_OK = 0,
  FB_ERROR_CONFIG = 1,   /* bad setting, invalid combination, bad argument */
  FB_ERROR_IO = 2,       /* file missing, unreadable or unwritable */
  FB_ERROR_DATA = 3,     /* malformed dataset file */
  FB_ERROR_NUMERIC = 4,  /* training diverged */
  FB_ERROR_INTERNAL = 5
} fb_status;

/* Key/value settings; keys are the CLI long flags without "--". */
typedef struct fb_config fb_config;
/* A resolved list of experiments (a scenario can expand to several). */
typedef struct fb_plan fb_plan;
/* One finished experiment and its convergence curve. */
typedef struct fb_run fb_run;

typedef struct fb_round_record {
  uint64_t round;
  double train_loss;
  double test_accuracy;
  uint64_t bytes_up;
  uint64_t bytes_down;
  double wall_ms;
} fb_round_record;

typedef struct fb_summary {
  double final_accuracy;
  double best_accuracy;
  uint64_t best_round;
  uint64_t total_bytes_up;
  uint64_t total_bytes_down;
  uint64_t param_count;
} fb_summary;

FEDBENCH_API const char* fb_version(void);
FEDBENCH_API const char* fb_last_error(void);
FEDBENCH_API const char* fb_status_name(fb_status status);

FEDBENCH_API fb_status fb_config_create(fb_config** out);
FEDBENCH_API void fb_config_destroy(fb_config* config);
FEDBENCH_API fb_status fb_config_set(fb_config* config, const char* key, const char* value);
/* Returns NULL when the key is unset. */
FEDBENCH_API const char* fb_config_get(const fb_config* config, const char* key);
/* Merges key=value lines from a file; later fb_config_set calls override. */
FEDBENCH_API fb_status fb_config_load_file(fb_config* config, const char* path);

/* Expands the config into experiments. Datasets loaded while running the
 * plan are cached on it. */
FEDBENCH_API fb_status fb_plan_create(const fb_config* config, fb_plan** out);
FEDBENCH_API void fb_plan_destroy(fb_plan* plan);
FEDBENCH_API size_t fb_plan_size(const fb_plan* plan);
/* Run id of experiment `index`; NULL when out of range. */
FEDBENCH_API const char* fb_plan_run_id(const fb_plan* plan, size_t index);
FEDBENCH_API fb_status fb_plan_run(fb_plan* plan, size_t index, fb_run** out);

FEDBENCH_API void fb_run_destroy(fb_run* run);
FEDBENCH_API const char* fb_run_id(const fb_run* run);
FEDBENCH_API const char* fb_run_csv_path(const fb_run* run);
/* Echoed configuration value (e.g. "paradigm", "participants"); NULL if absent. */
FEDBENCH_API const char* fb_run_config_value(const fb_run* run, const char* key);
FEDBENCH_API size_t fb_run_round_count(const fb_run* run);
FEDBENCH_API fb_status fb_run_round(const fb_run* run, size_t index, fb_round_record* out);
FEDBENCH_API fb_status fb_run_summary(const fb_run* run, fb_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* FEDBENCH_FEDBENCH_H_ */
