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

/* C interface to libvtg.
 *
 * All state lives behind opaque handles. Every function that can fail
 * returns a vtg_status; the message of the last failure on a context is
 * available from vtg_context_last_error. Strings returned by the library are
 * owned by it and stay valid until the next call on the same handle.
 * A context must not be used from two threads at once; distinct contexts are
 * independent. */

#ifndef VTG_VTG_H_
#define VTG_VTG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#ifdef VTG_BUILDING_LIBRARY
#define VTG_API __declspec(dllexport)
#else
#define VTG_API __declspec(dllimport)
#endif
#else
#define VTG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 1 and 2 double as process exit codes. */
typedef enum vtg_status {
  VTG_OK = 0,
  VTG_ERR_VALIDATION = 1,
  VTG_ERR_IO = 2,
  VTG_ERR_INVALID_ARGUMENT = 3,
  VTG_ERR_INTERNAL = 4,
} vtg_status;

VTG_API const char* vtg_version(void);
VTG_API const char* vtg_status_string(vtg_status status);

/* --------------------------------------------------------------------------
 * Context: configuration, last error and last command report. */

typedef struct vtg_context vtg_context;

VTG_API vtg_status vtg_context_create(vtg_context** out);
VTG_API void vtg_context_destroy(vtg_context* ctx);

/* Replaces the configuration. Missing keys take their defaults. */
VTG_API vtg_status vtg_context_load_config(vtg_context* ctx, const char* path);
VTG_API vtg_status vtg_context_set_config_json(vtg_context* ctx, const char* json);
VTG_API vtg_status vtg_context_set_seed(vtg_context* ctx, uint64_t seed);

/* Full configuration as pretty-printed JSON. */
VTG_API const char* vtg_context_config_json(vtg_context* ctx);
VTG_API const char* vtg_context_last_error(const vtg_context* ctx);
/* JSON report of the last command, or "{}" before the first one. */
VTG_API const char* vtg_context_report(const vtg_context* ctx);

/* --------------------------------------------------------------------------
 * Pipeline commands. Each writes its JSON report to the context. */

VTG_API vtg_status vtg_convert(vtg_context* ctx, const char* input, const char* output, int skip_invalid);
VTG_API vtg_status vtg_teacher(vtg_context* ctx, const char* similarity, const char* output);
VTG_API vtg_status vtg_losscheck(vtg_context* ctx);
VTG_API vtg_status vtg_fit(vtg_context* ctx, const char* dataset, const char* output);
/* task is "moments", "highlights" or "summary"; segments may be NULL except
 * for summary, which needs per-video features or Gram matrices. */
VTG_API vtg_status vtg_decode(vtg_context* ctx, const char* predictions, const char* task, const char* segments,
                              const char* output);
VTG_API vtg_status vtg_eval(vtg_context* ctx, const char* decoded, const char* ground_truth, const char* task);

/* --------------------------------------------------------------------------
 * Kernels. */

VTG_API vtg_status vtg_temporal_iou(double a_start, double a_end, double b_start, double b_end, double* out);

/* Greedy 1-D NMS. Writes the indices of kept candidates, best first, to
 * keep (capacity n) and their number to kept. */
VTG_API vtg_status vtg_nms_1d(const double* starts, const double* ends, const double* scores, size_t n,
                              double iou_threshold, size_t* keep, size_t* kept);

/* --------------------------------------------------------------------------
 * Unified labels. */

typedef struct vtg_label vtg_label;

VTG_API vtg_status vtg_label_from_intervals(size_t num_clips, double clip_len, const double* starts,
                                            const double* ends, size_t n, vtg_label** out);
VTG_API vtg_status vtg_label_from_curve(size_t num_clips, double clip_len, const double* values, double bin,
                                        vtg_label** out);
VTG_API size_t vtg_label_num_clips(const vtg_label* label);
/* Background clips report zero offsets. Any output pointer may be NULL. */
VTG_API vtg_status vtg_label_get(const vtg_label* label, size_t clip, uint8_t* foreground, double* offset_start,
                                 double* offset_end, double* saliency);
VTG_API void vtg_label_destroy(vtg_label* label);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VTG_VTG_H_ */
