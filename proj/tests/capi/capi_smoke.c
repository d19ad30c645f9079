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

/* Exercises the C interface from a C translation unit. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "fedbench/fedbench.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(int argc, char** argv) {
  fb_config* config = NULL;
  fb_plan* plan = NULL;
  fb_run* run = NULL;
  fb_round_record record;
  fb_summary summary;
  size_t i;
  FILE* csv;

  if (argc < 2) {
    fprintf(stderr, "usage: %s OUT_DIR\n", argv[0]);
    return 2;
  }
  EXPECT(strlen(fb_version()) > 0);
  EXPECT(strcmp(fb_status_name(FB_ERROR_IO), "I/O error") == 0);

  EXPECT(fb_config_create(&config) == FB_OK);
  EXPECT(fb_config_set(config, "no-such-key", "1") == FB_ERROR_CONFIG);
  EXPECT(strstr(fb_last_error(), "no-such-key") != NULL);
  EXPECT(fb_config_get(config, "rounds") == NULL);
  EXPECT(fb_config_set(config, "dataset", "synthetic") == FB_OK);
  EXPECT(fb_config_set(config, "participants", "4") == FB_OK);
  EXPECT(fb_config_set(config, "ratio", "0.5") == FB_OK);
  EXPECT(fb_config_set(config, "rounds", "3") == FB_OK);
  EXPECT(fb_config_set(config, "model", "logreg") == FB_OK);
  EXPECT(fb_config_set(config, "out", argv[1]) == FB_OK);
  EXPECT(strcmp(fb_config_get(config, "rounds"), "3") == 0);
  EXPECT(fb_config_load_file(config, "/nonexistent/fedbench.cfg") == FB_ERROR_IO);

  EXPECT(fb_plan_create(config, &plan) == FB_OK);
  EXPECT(fb_plan_size(plan) == 1);
  EXPECT(strncmp(fb_plan_run_id(plan, 0), "custom_synthetic_federated", 26) == 0);
  EXPECT(fb_plan_run_id(plan, 1) == NULL);
  EXPECT(fb_plan_run(plan, 5, &run) == FB_ERROR_CONFIG);

  EXPECT(fb_plan_run(plan, 0, &run) == FB_OK);
  if (run != NULL) {
    EXPECT(fb_run_round_count(run) == 3);
    for (i = 0; i < fb_run_round_count(run); ++i) {
      EXPECT(fb_run_round(run, i, &record) == FB_OK);
      EXPECT(record.round == i + 1);
      EXPECT(record.test_accuracy >= 0.0 && record.test_accuracy <= 1.0);
    }
    EXPECT(fb_run_round(run, 3, &record) == FB_ERROR_CONFIG);
    EXPECT(fb_run_summary(run, &summary) == FB_OK);
    EXPECT(summary.total_bytes_up == 3u * 2u * summary.param_count * 8u);
    EXPECT(strcmp(fb_run_config_value(run, "paradigm"), "federated") == 0);
    EXPECT(fb_run_csv_path(run) != NULL);
    csv = fopen(fb_run_csv_path(run), "r");
    EXPECT(csv != NULL);
    if (csv != NULL) fclose(csv);
    fb_run_destroy(run);
  }

  EXPECT(fb_config_set(config, "rounds", "0") == FB_OK);
  fb_plan_destroy(plan);
  plan = NULL;
  EXPECT(fb_plan_create(config, &plan) == FB_ERROR_CONFIG);
  fb_plan_destroy(plan);
  fb_config_destroy(config);
  fb_config_destroy(NULL);

  if (failures != 0) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return EXIT_FAILURE;
  }
  puts("capi_smoke: ok");
  return EXIT_SUCCESS;
}
