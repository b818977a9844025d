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

// Turning per-clip predictions into moments, highlights, and summaries.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vtg/core_types.hpp"

namespace vtg {

inline constexpr double kDefaultNmsThreshold = 0.7;
inline constexpr double kDefaultSummaryBudget = 0.02;
inline constexpr std::size_t kDefaultMaxSegments = 20;
inline constexpr std::size_t kDefaultMaxSegmentClips = 200;

struct ScoredInterval {
  Interval interval;
  double score = 0.0;
  bool operator==(const ScoredInterval&) const = default;
};

/// Greedy 1-D NMS. Candidates are visited by descending score, then earlier
/// start, then earlier input position; anything with IoU above the threshold
/// against a kept interval is dropped.
std::vector<ScoredInterval> nms_1d(const std::vector<ScoredInterval>& candidates,
                                   double iou_threshold = kDefaultNmsThreshold);

/// Indices of the candidates nms_1d keeps, in the same order.
std::vector<std::size_t> nms_1d_indices(const std::vector<ScoredInterval>& candidates,
                                        double iou_threshold = kDefaultNmsThreshold);

struct MomentOptions {
  double iou_threshold = kDefaultNmsThreshold;
  std::size_t top_k = 0;  // 0 keeps everything NMS leaves
  bool add_saliency = false;
};

/// One candidate per clip (its decoded boundary scored by sigmoid(logit)), then NMS.
std::vector<ScoredInterval> decode_moments(const PredictionSet& pred, const ClipTimeline& timeline,
                                           const MomentOptions& options = {});

enum class HighlightMode { FPlusS, FOnly };

const char* to_string(HighlightMode m);
HighlightMode highlight_mode_from_string(const std::string& s);

std::vector<double> highlight_scores(const PredictionSet& pred, HighlightMode mode);

/// Top-k clip indices by highlight score, ties to the earlier clip. k larger
/// than the video is truncated with a warning.
std::vector<std::size_t> decode_highlights(const PredictionSet& pred, HighlightMode mode, std::size_t k = 1,
                                           Warnings* warnings = nullptr);

/// Contiguous segmentation of [0, num_clips) stored as the start index of every segment.
struct SegmentList {
  std::size_t num_clips = 0;
  std::vector<std::size_t> starts;

  std::size_t count() const noexcept { return starts.size(); }
  /// [begin, end) clip ranges.
  std::vector<std::pair<std::size_t, std::size_t>> ranges() const;
  bool operator==(const SegmentList&) const = default;
};

void validate(const SegmentList& seg, std::size_t max_segments, std::size_t max_clips);

struct KtsOptions {
  std::size_t max_segments = kDefaultMaxSegments;
  std::size_t max_clips = kDefaultMaxSegmentClips;
  double penalty = 1.0;
  /// Forces this many segments instead of penalised model selection.
  std::optional<std::size_t> fixed_segments;
};

/// X X^T for row-major clip features.
Matrix gram_from_features(const Matrix& features);

/// Within-segment scatter of clips [begin, end) under a Gram matrix.
double segment_scatter(const Matrix& gram, std::size_t begin, std::size_t end);

struct KtsResult {
  SegmentList segments;
  double scatter = 0.0;  // total within-segment scatter of the chosen segmentation
  /// Minimal scatter for every feasible segment count (index m-1); infinite when infeasible.
  std::vector<double> scatter_by_count;
};

/// Kernel temporal segmentation: a DP over segment counts 1..max_segments with
/// segment length capped at max_clips; the count minimising
/// scatter(m) + penalty * m * (log(n / m) + 1) wins.
KtsResult kts_segment(const Matrix& gram, const KtsOptions& options = {});

enum class SegmentAggregate { Mean, Max };

const char* to_string(SegmentAggregate a);
SegmentAggregate segment_aggregate_from_string(const std::string& s);

struct SummaryResult {
  std::vector<std::size_t> clips;  // ascending
  std::vector<double> segment_scores;
  std::size_t budget = 0;
};

std::size_t summary_budget(std::size_t num_clips, double budget_fraction);

/// Top max(1, floor(fraction * n)) clips by sigmoid(logit), plus one
/// aggregated foreground score per segment.
SummaryResult decode_summary(const PredictionSet& pred, const SegmentList& segments,
                             double budget_fraction = kDefaultSummaryBudget,
                             SegmentAggregate aggregate = SegmentAggregate::Mean);

}  // namespace vtg
