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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtg/clip_teacher.hpp"
#include "vtg/decode.hpp"
#include "vtg/label_unify.hpp"
#include "vtg/losses.hpp"
#include "vtg/metrics.hpp"

namespace vtg {

/// Every tunable of the pipeline. Defaults carry the published constants:
/// tau 0.07, negative weight 0.1, NMS 0.7, 2% summary budget, KTS 20/200,
/// mAP over 0.5:0.05:0.95 and recall at 0.3/0.5/0.7.
struct RunConfig {
  LossWeights loss;
  Aggregation aggregation = Aggregation::PerVideo;

  double curve_bin = kDefaultCurveBin;
  std::size_t teacher_top_k = kDefaultTopConcepts;

  double nms_threshold = kDefaultNmsThreshold;
  std::size_t moment_top_k = 10;
  bool moment_add_saliency = false;
  HighlightMode highlight_mode = HighlightMode::FPlusS;
  std::size_t highlight_k = 1;

  std::size_t kts_max_segments = kDefaultMaxSegments;
  std::size_t kts_max_clips = kDefaultMaxSegmentClips;
  double kts_penalty = 1.0;
  SegmentAggregate segment_aggregate = SegmentAggregate::Mean;
  double summary_budget = kDefaultSummaryBudget;

  std::vector<double> map_thresholds = vtg::map_thresholds();
  std::vector<double> recall_thresholds = vtg::recall_thresholds();
  std::size_t recall_k = 1;

  std::size_t fit_steps = 2000;
  double fit_learning_rate = 1.0;
  std::size_t fit_embed_dim = 16;

  std::size_t losscheck_points = 1000;
  double losscheck_epsilon = 1e-5;
  double losscheck_tolerance = 1e-5;

  std::uint64_t seed = 0;
};

void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::string& path);

}  // namespace vtg
