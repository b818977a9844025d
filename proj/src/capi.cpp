// Copyright 2026 The vtgkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vtg/vtg.h"

#include <new>
#include <string>

#include "vtg/commands.hpp"
#include "vtg/config.hpp"
#include "vtg/decode.hpp"
#include "vtg/label_unify.hpp"

struct vtg_context {
  vtg::RunConfig config;
  std::string last_error;
  std::string report = "{}";
  std::string config_text;
};

struct vtg_label {
  vtg::UnifiedLabel label;
};

namespace {

vtg_status status_of(vtg::ExitStatus s) {
  switch (s) {
    case vtg::ExitStatus::Ok: return VTG_OK;
    case vtg::ExitStatus::Validation: return VTG_ERR_VALIDATION;
    case vtg::ExitStatus::Io: return VTG_ERR_IO;
  }
  return VTG_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into a status and recording the message.
template <typename Fn>
vtg_status guarded(vtg_context* ctx, Fn&& fn) {
  std::string msg;
  vtg_status st = VTG_OK;
  try {
    st = fn();
  } catch (const vtg::Error& e) {
    msg = e.what();
    st = e.kind() == vtg::ErrorKind::Io ? VTG_ERR_IO : VTG_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    msg = "out of memory";
    st = VTG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    msg = e.what();
    st = VTG_ERR_INTERNAL;
  } catch (...) {
    msg = "unknown error";
    st = VTG_ERR_INTERNAL;
  }
  if (ctx && st != VTG_OK && !msg.empty()) ctx->last_error = msg;
  return st;
}

vtg_status run(vtg_context* ctx, const vtg::CommandResult& res) {
  ctx->report = res.report.dump();
  if (res.status != vtg::ExitStatus::Ok) {
    ctx->last_error = res.report.contains("error") ? res.report["error"].get<std::string>()
                                                   : std::string(res.report["command"].get<std::string>()) +
                                                         " reported record-level errors; see the report";
  }
  return status_of(res.status);
}

#define VTG_CHECK_ARG(ctx, cond)                                  \
  do {                                                            \
    if (!(cond)) {                                                \
      if (ctx) (ctx)->last_error = "invalid argument: " #cond;    \
      return VTG_ERR_INVALID_ARGUMENT;                            \
    }                                                             \
  } while (0)

}  // namespace

extern "C" {

const char* vtg_version(void) { return "1.0.0"; }

const char* vtg_status_string(vtg_status status) {
  switch (status) {
    case VTG_OK: return "ok";
    case VTG_ERR_VALIDATION: return "validation error";
    case VTG_ERR_IO: return "I/O error";
    case VTG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case VTG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

vtg_status vtg_context_create(vtg_context** out) {
  if (!out) return VTG_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) vtg_context();
  return *out ? VTG_OK : VTG_ERR_INTERNAL;
}

void vtg_context_destroy(vtg_context* ctx) { delete ctx; }

vtg_status vtg_context_load_config(vtg_context* ctx, const char* path) {
  VTG_CHECK_ARG(ctx, ctx && path);
  return guarded(ctx, [&] {
    ctx->config = vtg::load_config(path);
    return VTG_OK;
  });
}

vtg_status vtg_context_set_config_json(vtg_context* ctx, const char* json) {
  VTG_CHECK_ARG(ctx, ctx && json);
  return guarded(ctx, [&] {
    const auto j = nlohmann::json::parse(json, nullptr, false);
    vtg::require(!j.is_discarded(), "config is not valid JSON");
    ctx->config = vtg::config_from_json(j);
    return VTG_OK;
  });
}

vtg_status vtg_context_set_seed(vtg_context* ctx, uint64_t seed) {
  VTG_CHECK_ARG(ctx, ctx);
  ctx->config.seed = seed;
  return VTG_OK;
}

const char* vtg_context_config_json(vtg_context* ctx) {
  if (!ctx) return "";
  ctx->config_text = vtg::to_json(ctx->config).dump(2);
  return ctx->config_text.c_str();
}

const char* vtg_context_last_error(const vtg_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

const char* vtg_context_report(const vtg_context* ctx) { return ctx ? ctx->report.c_str() : "{}"; }

vtg_status vtg_convert(vtg_context* ctx, const char* input, const char* output, int skip_invalid) {
  VTG_CHECK_ARG(ctx, ctx && input && output);
  return guarded(ctx, [&] { return run(ctx, vtg::cmd_convert(ctx->config, input, output, skip_invalid != 0)); });
}

vtg_status vtg_teacher(vtg_context* ctx, const char* similarity, const char* output) {
  VTG_CHECK_ARG(ctx, ctx && similarity && output);
  return guarded(ctx, [&] { return run(ctx, vtg::cmd_teacher(ctx->config, similarity, output)); });
}

vtg_status vtg_losscheck(vtg_context* ctx) {
  VTG_CHECK_ARG(ctx, ctx);
  return guarded(ctx, [&] { return run(ctx, vtg::cmd_losscheck(ctx->config)); });
}

vtg_status vtg_fit(vtg_context* ctx, const char* dataset, const char* output) {
  VTG_CHECK_ARG(ctx, ctx && dataset && output);
  return guarded(ctx, [&] { return run(ctx, vtg::cmd_fit(ctx->config, dataset, output)); });
}

vtg_status vtg_decode(vtg_context* ctx, const char* predictions, const char* task, const char* segments,
                      const char* output) {
  VTG_CHECK_ARG(ctx, ctx && predictions && task && output);
  return guarded(ctx, [&] {
    return run(ctx, vtg::cmd_decode(ctx->config, predictions, vtg::decode_task_from_string(task), output,
                                    segments ? segments : ""));
  });
}

vtg_status vtg_eval(vtg_context* ctx, const char* decoded, const char* ground_truth, const char* task) {
  VTG_CHECK_ARG(ctx, ctx && decoded && ground_truth && task);
  return guarded(ctx, [&] {
    return run(ctx, vtg::cmd_eval(ctx->config, decoded, ground_truth, vtg::decode_task_from_string(task)));
  });
}

vtg_status vtg_temporal_iou(double a_start, double a_end, double b_start, double b_end, double* out) {
  if (!out) return VTG_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, [&] {
    const vtg::Interval a{a_start, a_end}, b{b_start, b_end};
    vtg::validate(a);
    vtg::validate(b);
    *out = vtg::temporal_iou(a, b);
    return VTG_OK;
  });
}

vtg_status vtg_nms_1d(const double* starts, const double* ends, const double* scores, size_t n,
                      double iou_threshold, size_t* keep, size_t* kept) {
  if (!kept || (n > 0 && (!starts || !ends || !scores || !keep))) return VTG_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, [&] {
    std::vector<vtg::ScoredInterval> cands(n);
    for (size_t i = 0; i < n; ++i) cands[i] = {{starts[i], ends[i]}, scores[i]};
    const auto idx = vtg::nms_1d_indices(cands, iou_threshold);
    for (size_t i = 0; i < idx.size(); ++i) keep[i] = idx[i];
    *kept = idx.size();
    return VTG_OK;
  });
}

vtg_status vtg_label_from_intervals(size_t num_clips, double clip_len, const double* starts, const double* ends,
                                    size_t n, vtg_label** out) {
  if (!out || (n > 0 && (!starts || !ends))) return VTG_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(nullptr, [&] {
    const vtg::ClipTimeline tl(num_clips, clip_len);
    std::vector<vtg::Interval> ivs(n);
    for (size_t i = 0; i < n; ++i) ivs[i] = {starts[i], ends[i]};
    *out = new vtg_label{vtg::from_intervals(tl, ivs)};
    return VTG_OK;
  });
}

vtg_status vtg_label_from_curve(size_t num_clips, double clip_len, const double* values, double bin,
                                vtg_label** out) {
  if (!out || (num_clips > 0 && !values)) return VTG_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(nullptr, [&] {
    const vtg::ClipTimeline tl(num_clips, clip_len);
    vtg::CurveAnnotation curve{std::vector<double>(values, values + num_clips)};
    *out = new vtg_label{vtg::from_curve(tl, curve, bin)};
    return VTG_OK;
  });
}

size_t vtg_label_num_clips(const vtg_label* label) { return label ? label->label.size() : 0; }

vtg_status vtg_label_get(const vtg_label* label, size_t clip, uint8_t* foreground, double* offset_start,
                         double* offset_end, double* saliency) {
  if (!label) return VTG_ERR_INVALID_ARGUMENT;
  const auto& l = label->label;
  if (clip >= l.size()) return VTG_ERR_INVALID_ARGUMENT;
  if (foreground) *foreground = l.foreground[clip];
  if (offset_start) *offset_start = l.foreground[clip] ? l.offsets[clip].start : 0.0;
  if (offset_end) *offset_end = l.foreground[clip] ? l.offsets[clip].end : 0.0;
  if (saliency) *saliency = l.saliency[clip];
  return VTG_OK;
}

void vtg_label_destroy(vtg_label* label) { delete label; }

}  // extern "C"
