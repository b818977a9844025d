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

#include "vtg/label_unify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vtg {

namespace {

// Slack for representation error when quantising (0.6 / 0.05 is 11.999...).
constexpr double kBinSlack = 1e-9;

long bin_index(double v, double bin) { return static_cast<long>(std::floor(v / bin + kBinSlack)); }

}  // namespace

UnifiedLabel from_intervals(const ClipTimeline& timeline, const std::vector<Interval>& intervals,
                            Warnings* warnings) {
  const double duration = timeline.duration();
  for (const auto& iv : intervals) {
    validate(iv);
    require(iv.start >= 0.0 && iv.end <= duration,
            "interval [" + std::to_string(iv.start) + ", " + std::to_string(iv.end) +
                "] outside video of duration " + std::to_string(duration));
  }
  if (intervals.empty()) warn(warnings, "no intervals given; label is all background");

  // Earlier means earlier start, then earlier position in the input.
  std::vector<std::size_t> order(intervals.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return intervals[a].start < intervals[b].start;
  });

  UnifiedLabel label = UnifiedLabel::background(timeline.num_clips());
  for (std::size_t i = 0; i < timeline.num_clips(); ++i) {
    const double t = timeline.timestamp(i);
    const Interval* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k : order) {
      const Interval& iv = intervals[k];
      if (t < iv.start || t > iv.end) continue;
      const double dist = std::abs(0.5 * (iv.start + iv.end) - t);
      if (dist < best_dist) {
        best_dist = dist;
        best = &iv;
      }
    }
    if (!best) continue;
    label.foreground[i] = 1;
    label.offsets[i] = offsets_from(timeline, i, *best);
    label.saliency[i] = kIntervalSaliency;
  }
  return label;
}

UnifiedLabel from_curve(const ClipTimeline& timeline, const CurveAnnotation& curve, double bin,
                        Warnings* warnings) {
  const std::size_t n = timeline.num_clips();
  require(curve.values.size() == n, "curve length " + std::to_string(curve.values.size()) +
                                        " does not match timeline (" + std::to_string(n) + " clips)");
  require(bin > 0.0 && bin < 1.0, "curve bin must lie in (0, 1)");

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(std::isfinite(curve.values[i]), "non-finite curve value at clip " + std::to_string(i));
    values[i] = std::clamp(curve.values[i], 0.0, 1.0);
  }

  const long top = bin_index(*std::max_element(values.begin(), values.end()), bin);
  UnifiedLabel label = UnifiedLabel::background(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (bin_index(values[i], bin) == top && values[i] > 0.0) {
      label.foreground[i] = 1;
      label.saliency[i] = values[i];
    }
  }
  if (label.foreground_count() == 0) warn(warnings, "curve is identically zero; label is all background");
  if (label.foreground_count() == n) warn(warnings, "whole video shares the top curve bin");

  for (const Interval& run : intervals_of(timeline, label)) {
    const auto first = static_cast<std::size_t>(std::llround(run.start / timeline.clip_len()));
    const auto last = static_cast<std::size_t>(std::llround(run.end / timeline.clip_len()));
    for (std::size_t i = first; i < last; ++i) label.offsets[i] = offsets_from(timeline, i, run);
  }
  return label;
}

namespace {

std::vector<double> normalized_points(const ClipTimeline& timeline, const PointAnnotation& points) {
  require(!points.timestamps.empty(), "point annotation needs at least one timestamp");
  std::vector<double> ts = points.timestamps;
  for (double p : ts) {
    require(std::isfinite(p) && p >= 0.0 && p <= timeline.duration(),
            "point " + std::to_string(p) + " outside video of duration " +
                std::to_string(timeline.duration()));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

double point_window(const ClipTimeline& timeline, const PointAnnotation& points) {
  const auto ts = normalized_points(timeline, points);
  if (ts.size() == 1) return 2.0 * timeline.clip_len();
  return (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
}

std::vector<Interval> point_intervals(const ClipTimeline& timeline, const PointAnnotation& points) {
  const auto ts = normalized_points(timeline, points);
  const double half = 0.5 * point_window(timeline, points);
  std::vector<Interval> out;
  out.reserve(ts.size());
  for (double p : ts) {
    Interval iv = clamp_to({p - half, p + half}, 0.0, timeline.duration());
    // The clip holding the point is always foreground, even for tightly packed points.
    const auto clip = std::min(static_cast<std::size_t>(p / timeline.clip_len()), timeline.num_clips() - 1);
    const double t = timeline.timestamp(clip);
    iv.start = std::min(iv.start, t);
    iv.end = std::max(iv.end, t);
    out.push_back(iv);
  }
  return out;
}

std::vector<UnifiedLabel> from_points(const ClipTimeline& timeline, const PointAnnotation& points,
                                      Warnings* warnings) {
  std::vector<UnifiedLabel> out;
  for (const Interval& iv : point_intervals(timeline, points)) {
    out.push_back(from_intervals(timeline, {iv}, warnings));
  }
  return out;
}

std::vector<Interval> intervals_of(const ClipTimeline& timeline, const UnifiedLabel& label) {
  require(label.size() == timeline.num_clips(), "label length does not match timeline");
  std::vector<Interval> runs;
  std::size_t i = 0;
  const std::size_t n = label.size();
  while (i < n) {
    if (!label.foreground[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && label.foreground[j + 1]) ++j;
    runs.push_back({timeline.clip_start(i), timeline.clip_end(j)});
    i = j + 1;
  }
  return runs;
}

}  // namespace vtg
