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

// Evaluation metrics for moment retrieval, highlight detection, and
// query-focused summarisation.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vtg/core_types.hpp"
#include "vtg/decode.hpp"

namespace vtg {

struct MomentEvalItem {
  std::string query_id;
  std::vector<ScoredInterval> predictions;  // descending score
  std::vector<Interval> ground_truths;
};

struct HighlightEvalItem {
  std::string query_id;
  std::vector<double> clip_scores;
  std::vector<std::uint8_t> positives;
};

struct SummaryEvalItem {
  std::set<std::size_t> predicted;
  std::set<std::size_t> ground_truth;
  std::map<std::size_t, std::set<std::string>> clip_concepts;
};

/// Thresholds 0.5, 0.55, ..., 0.95 without accumulated rounding.
std::vector<double> map_thresholds();
std::vector<double> recall_thresholds();  // 0.3, 0.5, 0.7

struct RecallReport {
  std::map<double, double> recall;
  double miou = 0.0;
};

RecallReport recall_at_k(const std::vector<MomentEvalItem>& items, std::size_t k,
                         const std::vector<double>& thresholds);

/// AP of one query: predictions matched greedily in the given order, each
/// ground truth claimed at most once by the unmatched one with highest IoU.
/// The area under the precision/recall staircase, without interpolation.
double moment_average_precision(const MomentEvalItem& item, double threshold);

struct MapReport {
  std::map<double, double> map;
  double average = 0.0;
};

MapReport moment_map(const std::vector<MomentEvalItem>& items, const std::vector<double>& thresholds);

struct HitReport {
  double hit_at_1 = 0.0;
  std::size_t excluded = 0;  // items without any positive
};

HitReport hit_at_1(const std::vector<HighlightEvalItem>& items);

/// AP of a clip ranking (descending score, ties to the earlier clip) against binary positives.
/// `cutoff` truncates the ranking; the recall denominator becomes min(cutoff, positives).
double ranking_average_precision(const std::vector<double>& scores, const std::vector<std::uint8_t>& positives,
                                 std::size_t cutoff = 0);

double highlight_map(const std::vector<HighlightEvalItem>& items);
double top5_map(const std::vector<HighlightEvalItem>& items);

/// Maximum-weight bipartite matching on a dense rows x cols weight matrix
/// (Hungarian algorithm). Returns the matched weight and, per row, the
/// matched column or -1.
struct Matching {
  double weight = 0.0;
  std::vector<long> row_to_col;
};

Matching max_weight_matching(const Matrix& weights);

double concept_iou(const std::set<std::string>& a, const std::set<std::string>& b);

struct SummaryScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Warnings warnings;
};

SummaryScore qfvs_f1(const SummaryEvalItem& item);

}  // namespace vtg
