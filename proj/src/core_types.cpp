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

#include "vtg/core_types.hpp"

#include <algorithm>
#include <cmath>

namespace vtg {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

void warn(Warnings* sink, std::string msg) {
  if (sink) sink->push_back(std::move(msg));
}

ClipTimeline::ClipTimeline(std::size_t num_clips, double clip_len)
    : num_clips_(num_clips), clip_len_(clip_len) {
  require(num_clips >= 1, "timeline needs at least one clip");
  require(std::isfinite(clip_len) && clip_len > 0.0, "clip length must be positive and finite");
}

ClipTimeline ClipTimeline::from_duration(double duration, double clip_len) {
  require(std::isfinite(duration) && duration >= 0.0, "duration must be finite and non-negative");
  require(std::isfinite(clip_len) && clip_len > 0.0, "clip length must be positive and finite");
  // The epsilon keeps durations such as 0.3 / 0.1 from losing a clip to rounding.
  const double n = std::floor(duration / clip_len + 1e-9);
  return ClipTimeline(std::max<std::size_t>(1, static_cast<std::size_t>(n)), clip_len);
}

double ClipTimeline::timestamp(std::size_t i) const {
  if (i >= num_clips_) {
    fail(ErrorKind::Index,
         "clip index " + std::to_string(i) + " out of range [0, " + std::to_string(num_clips_) + ")");
  }
  return (static_cast<double>(i) + 0.5) * clip_len_;
}

void validate(const Interval& iv) {
  require(std::isfinite(iv.start) && std::isfinite(iv.end), "interval endpoints must be finite");
  require(iv.start <= iv.end, "interval start exceeds end");
}

Interval clamp_to(const Interval& iv, double lo, double hi) {
  return {std::clamp(iv.start, lo, hi), std::clamp(iv.end, lo, hi)};
}

double temporal_iou(const Interval& a, const Interval& b) {
  const double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = a.length() + b.length() - inter;
  if (uni <= 0.0) return (a == b) ? 1.0 : 0.0;
  return inter / uni;
}

std::size_t UnifiedLabel::foreground_count() const {
  return static_cast<std::size_t>(std::count(foreground.begin(), foreground.end(), 1));
}

UnifiedLabel UnifiedLabel::background(std::size_t n) {
  UnifiedLabel l;
  l.foreground.assign(n, 0);
  l.offsets.assign(n, Offsets{});
  l.saliency.assign(n, 0.0);
  return l;
}

void validate(const UnifiedLabel& label, const ClipTimeline& timeline) {
  const std::size_t n = timeline.num_clips();
  require(label.foreground.size() == n && label.offsets.size() == n && label.saliency.size() == n,
          "label length does not match timeline (" + std::to_string(n) + " clips)");
  for (std::size_t i = 0; i < n; ++i) {
    const auto at = " at clip " + std::to_string(i);
    const double s = label.saliency[i];
    require(label.foreground[i] <= 1, "foreground flag must be 0 or 1" + at);
    require(std::isfinite(s) && s >= 0.0 && s <= 1.0, "saliency outside [0, 1]" + at);
    const Offsets& d = label.offsets[i];
    if (label.foreground[i]) {
      require(s > 0.0, "foreground clip with zero saliency" + at);
      require(std::isfinite(d.start) && std::isfinite(d.end) && d.start >= 0.0 && d.end >= 0.0,
              "foreground offsets must be finite and non-negative" + at);
    } else {
      require(s == 0.0, "background clip with positive saliency" + at);
      require(d.start == 0.0 && d.end == 0.0, "background clip with non-null offsets" + at);
    }
  }
}

Offsets offsets_from(const ClipTimeline& timeline, std::size_t i, const Interval& iv) {
  const double t = timeline.timestamp(i);
  return {t - iv.start, iv.end - t};
}

Interval boundary_of(const ClipTimeline& timeline, const UnifiedLabel& label, std::size_t i) {
  const double t = timeline.timestamp(i);
  require(i < label.size(), "label shorter than timeline");
  require(label.offsets_valid(i), "offsets are only defined for foreground clips (clip " +
                                      std::to_string(i) + ")");
  const Offsets& d = label.offsets[i];
  return clamp_to({t - d.start, t + d.end}, 0.0, timeline.duration());
}

const char* to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::Sentence: return "sentence";
    case QueryKind::Title: return "title";
    case QueryKind::DomainName: return "domain_name";
    case QueryKind::Keywords: return "keywords";
    case QueryKind::Concept: return "concept";
  }
  return "sentence";
}

QueryKind query_kind_from_string(const std::string& s) {
  if (s == "sentence") return QueryKind::Sentence;
  if (s == "title") return QueryKind::Title;
  if (s == "domain_name") return QueryKind::DomainName;
  if (s == "keywords") return QueryKind::Keywords;
  if (s == "concept") return QueryKind::Concept;
  fail(ErrorKind::Validation, "unknown query kind '" + s + "'");
}

void validate(const PredictionSet& pred, const ClipTimeline& timeline) {
  const std::size_t n = timeline.num_clips();
  require(pred.f_logits.size() == n && pred.offsets.size() == n && pred.saliency.size() == n,
          "prediction length does not match timeline (" + std::to_string(n) + " clips)");
  for (std::size_t i = 0; i < n; ++i) {
    require(!std::isnan(pred.f_logits[i]), "NaN foreground logit");
    require(std::isfinite(pred.offsets[i].start) && std::isfinite(pred.offsets[i].end),
            "non-finite predicted offsets");
    require(std::isfinite(pred.saliency[i]) && pred.saliency[i] >= -1.0 - 1e-12 &&
                pred.saliency[i] <= 1.0 + 1e-12,
            "predicted saliency outside [-1, 1]");
  }
}

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Point: return "point";
    case SourceKind::Interval: return "interval";
    case SourceKind::Curve: return "curve";
  }
  return "interval";
}

SourceKind source_kind_from_string(const std::string& s) {
  if (s == "point") return SourceKind::Point;
  if (s == "interval") return SourceKind::Interval;
  if (s == "curve") return SourceKind::Curve;
  fail(ErrorKind::Validation, "unknown source kind '" + s + "'");
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace vtg
