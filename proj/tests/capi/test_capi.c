/* Copyright 2026 The vtgkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* Exercises the C interface from a C translation unit linked only against
 * the shared library. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "vtg/vtg.h"

static int failures = 0;

#define EXPECT(cond)                                                      \
  do {                                                                    \
    if (!(cond)) {                                                        \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                         \
    }                                                                     \
  } while (0)

static void test_version_and_status(void) {
  EXPECT(strcmp(vtg_version(), "1.0.0") == 0);
  EXPECT(strcmp(vtg_status_string(VTG_OK), "ok") == 0);
  EXPECT(strcmp(vtg_status_string(VTG_ERR_IO), "I/O error") == 0);
  EXPECT(VTG_ERR_VALIDATION == 1 && VTG_ERR_IO == 2);
}

static void test_context(const char* data_dir, const char* tmp_dir) {
  vtg_context* ctx = NULL;
  char path[4096];
  char out[4096];

  EXPECT(vtg_context_create(NULL) == VTG_ERR_INVALID_ARGUMENT);
  EXPECT(vtg_context_create(&ctx) == VTG_OK);
  EXPECT(strcmp(vtg_context_report(ctx), "{}") == 0);
  EXPECT(strstr(vtg_context_config_json(ctx), "\"tau\": 0.07") != NULL);

  EXPECT(vtg_context_set_config_json(ctx, "{\"loss\": {\"tau\": -1}}") == VTG_ERR_VALIDATION);
  EXPECT(strlen(vtg_context_last_error(ctx)) > 0);
  EXPECT(vtg_context_set_config_json(ctx, "not json") == VTG_ERR_VALIDATION);
  EXPECT(vtg_context_set_config_json(ctx, "{\"fit\": {\"steps\": 300}}") == VTG_OK);
  EXPECT(strstr(vtg_context_config_json(ctx), "\"steps\": 300") != NULL);
  EXPECT(vtg_context_set_seed(ctx, 11) == VTG_OK);
  EXPECT(strstr(vtg_context_config_json(ctx), "\"seed\": 11") != NULL);
  EXPECT(vtg_context_load_config(ctx, "/nonexistent/vtg.json") == VTG_ERR_IO);

  EXPECT(vtg_convert(ctx, NULL, "x", 0) == VTG_ERR_INVALID_ARGUMENT);

  snprintf(path, sizeof path, "%s/toy_intervals.jsonl", data_dir);
  snprintf(out, sizeof out, "%s/capi_gt.jsonl", tmp_dir);
  EXPECT(vtg_convert(ctx, path, out, 0) == VTG_OK);
  EXPECT(strstr(vtg_context_report(ctx), "\"records_out\":3") != NULL);

  snprintf(path, sizeof path, "%s/capi_pred.jsonl", tmp_dir);
  EXPECT(vtg_fit(ctx, out, path) == VTG_OK);
  EXPECT(strstr(vtg_context_report(ctx), "\"monotone\":true") != NULL);

  snprintf(out, sizeof out, "%s/capi_moments.jsonl", tmp_dir);
  EXPECT(vtg_decode(ctx, path, "captions", NULL, out) == VTG_ERR_VALIDATION);
  EXPECT(vtg_decode(ctx, path, "summary", NULL, out) == VTG_ERR_VALIDATION);
  EXPECT(strstr(vtg_context_last_error(ctx), "KTS") != NULL);
  EXPECT(vtg_decode(ctx, path, "moments", NULL, out) == VTG_OK);

  snprintf(path, sizeof path, "%s/capi_gt.jsonl", tmp_dir);
  EXPECT(vtg_eval(ctx, out, path, "moments") == VTG_OK);
  EXPECT(strstr(vtg_context_report(ctx), "\"R1@0.70\":1.0") != NULL);

  snprintf(path, sizeof path, "%s/absent.jsonl", tmp_dir);
  EXPECT(vtg_convert(ctx, path, out, 0) == VTG_ERR_IO);

  vtg_context_destroy(ctx);
  vtg_context_destroy(NULL);
}

static void test_kernels(void) {
  double iou = -1.0;
  const double starts[] = {1.0, 1.0, 6.0};
  const double ends[] = {5.0, 5.0, 9.0};
  const double scores[] = {0.8, 0.9, 0.1};
  size_t keep[3] = {0, 0, 0};
  size_t kept = 0;

  EXPECT(vtg_temporal_iou(0.0, 10.0, 5.0, 15.0, &iou) == VTG_OK);
  EXPECT(fabs(iou - 1.0 / 3.0) < 1e-15);
  EXPECT(vtg_temporal_iou(2.0, 1.0, 0.0, 1.0, &iou) == VTG_ERR_VALIDATION);
  EXPECT(vtg_temporal_iou(0.0, 1.0, 0.0, 1.0, NULL) == VTG_ERR_INVALID_ARGUMENT);

  EXPECT(vtg_nms_1d(starts, ends, scores, 3, 0.7, keep, &kept) == VTG_OK);
  EXPECT(kept == 2 && keep[0] == 1 && keep[1] == 2);
  EXPECT(vtg_nms_1d(NULL, NULL, NULL, 0, 0.7, NULL, &kept) == VTG_OK && kept == 0);
  EXPECT(vtg_nms_1d(starts, ends, scores, 3, 0.0, keep, &kept) == VTG_ERR_VALIDATION);
}

static void test_labels(void) {
  const double starts[] = {2.0};
  const double ends[] = {6.0};
  const double curve[] = {0.20, 0.61, 0.63, 0.30};
  const uint8_t want[] = {0, 1, 1, 0};
  vtg_label* label = NULL;
  uint8_t f = 9;
  double ds = -1.0, de = -1.0, s = -1.0;
  size_t i;

  EXPECT(vtg_label_from_intervals(4, 2.0, starts, ends, 1, &label) == VTG_OK);
  EXPECT(vtg_label_num_clips(label) == 4);
  EXPECT(vtg_label_get(label, 1, &f, &ds, &de, &s) == VTG_OK);
  EXPECT(f == 1 && ds == 1.0 && de == 3.0 && s == 1.0);
  EXPECT(vtg_label_get(label, 0, &f, &ds, &de, NULL) == VTG_OK);
  EXPECT(f == 0 && ds == 0.0 && de == 0.0);
  EXPECT(vtg_label_get(label, 4, &f, NULL, NULL, NULL) == VTG_ERR_INVALID_ARGUMENT);
  vtg_label_destroy(label);

  EXPECT(vtg_label_from_curve(4, 1.0, curve, 0.05, &label) == VTG_OK);
  for (i = 0; i < 4; ++i) {
    EXPECT(vtg_label_get(label, i, &f, NULL, NULL, NULL) == VTG_OK);
    EXPECT(f == want[i]);
  }
  vtg_label_destroy(label);

  EXPECT(vtg_label_from_intervals(4, 2.0, ends, starts, 1, &label) == VTG_ERR_VALIDATION);
  EXPECT(label == NULL);
  EXPECT(vtg_label_from_intervals(0, 2.0, NULL, NULL, 0, &label) == VTG_ERR_VALIDATION);
  vtg_label_destroy(NULL);
}

int main(int argc, char** argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: %s DATA_DIR TMP_DIR\n", argv[0]);
    return 2;
  }
  test_version_and_status();
  test_context(argv[1], argv[2]);
  test_kernels();
  test_labels();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
