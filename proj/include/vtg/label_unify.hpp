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

// Conversions from point, interval, and curve supervision into UnifiedLabel.

#pragma once

#include <vector>

#include "vtg/core_types.hpp"

namespace vtg {

/// Saliency assigned to foreground clips when the source label carries none.
inline constexpr double kIntervalSaliency = 1.0;
inline constexpr double kDefaultCurveBin = 0.05;

struct PointAnnotation {
  std::vector<double> timestamps;
};

struct CurveAnnotation {
  std::vector<double> values;
};

/// A clip is foreground iff its centre lies inside some interval. When several
/// intervals cover a clip, offsets come from the one whose centre is nearest,
/// ties going to the earlier interval.
UnifiedLabel from_intervals(const ClipTimeline& timeline, const std::vector<Interval>& intervals,
                            Warnings* warnings = nullptr);

/// Quantises the curve with `bin`, keeps the clips sharing the highest bin
/// (and a strictly positive value) as foreground, and gives every clip of a
/// foreground run offsets reaching the run's outer clip edges.
UnifiedLabel from_curve(const ClipTimeline& timeline, const CurveAnnotation& curve,
                        double bin = kDefaultCurveBin, Warnings* warnings = nullptr);

/// Window half-width used for narration points: half the mean gap between
/// consecutive points, or one clip length when there is a single point.
double point_window(const ClipTimeline& timeline, const PointAnnotation& points);

/// One label per (deduplicated, sorted) point, each from a symmetric window.
std::vector<UnifiedLabel> from_points(const ClipTimeline& timeline, const PointAnnotation& points,
                                      Warnings* warnings = nullptr);

/// The windows from_points converts, in the same order.
std::vector<Interval> point_intervals(const ClipTimeline& timeline, const PointAnnotation& points);

/// Maximal foreground runs as [first clip start, last clip end].
std::vector<Interval> intervals_of(const ClipTimeline& timeline, const UnifiedLabel& label);

}  // namespace vtg
