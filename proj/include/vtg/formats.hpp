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

// On-disk formats. All record files are JSON Lines with a "schema" field;
// similarity matrices also have a dense binary encoding. See docs/formats.md.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtg/clip_teacher.hpp"
#include "vtg/core_types.hpp"
#include "vtg/decode.hpp"
#include "vtg/label_unify.hpp"

namespace vtg {

inline constexpr int kSchemaVersion = 1;

/// One (video, query) line of a dataset file: the raw annotation and, once
/// converted, its unified label. Evaluation-only annotations ride along.
struct DatasetRecord {
  GroundTruthRecord gt;
  double duration = 0.0;
  bool has_label = false;

  std::optional<std::vector<Interval>> intervals;
  std::optional<PointAnnotation> points;
  std::optional<std::vector<std::string>> point_queries;
  std::optional<std::size_t> point_index;
  std::optional<CurveAnnotation> curve;

  std::optional<std::vector<std::uint8_t>> highlight_positives;
  std::optional<std::vector<std::size_t>> summary_clips;
  std::optional<std::vector<std::vector<std::string>>> clip_concepts;
};

DatasetRecord record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetRecord& r);

/// Labels a record from its raw annotation. Point records expand to one
/// record per narration point; records that already carry a label are
/// validated and returned unchanged.
std::vector<DatasetRecord> unify_record(const DatasetRecord& r, double curve_bin, Warnings* warnings = nullptr);

struct PredictionRecord {
  std::string video_id;
  std::string query_id;
  double duration = 0.0;
  double clip_len = 1.0;
  PredictionSet pred;

  ClipTimeline timeline() const { return ClipTimeline::from_duration(duration, clip_len); }
};

PredictionRecord prediction_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PredictionRecord& r);

/// Per-video KTS input: either clip features (rows are clips) or a Gram matrix.
struct SegmentInput {
  std::string video_id;
  std::optional<Matrix> features;
  std::optional<Matrix> gram;
};

SegmentInput segment_input_from_json(const nlohmann::json& j);

struct SimilarityBlock {
  std::string video_id;
  double clip_len = 1.0;
  SimilarityMatrix sim;
};

/// Streams similarity blocks from a text or binary file (detected by magic).
/// The callback receives either a parsed block or a per-block parse error.
/// Errors that make the rest of the stream unreadable are thrown.
void read_similarity_file(const std::string& path,
                          const std::function<void(const SimilarityBlock*, const std::string& error)>& on_block);

void write_similarity_text(std::ostream& out, const std::vector<SimilarityBlock>& blocks);
void write_similarity_binary(std::ostream& out, const std::vector<SimilarityBlock>& blocks);

/// Calls `on_line(line_number, json)` for each non-blank line. A line that is
/// not JSON is passed as a discarded value together with the parse error.
void for_each_json_line(std::istream& in,
                        const std::function<void(std::size_t, const nlohmann::json&, const std::string&)>& on_line);

/// Compact single-line dump.
std::string dump_line(const nlohmann::json& j);

Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json to_json(const Matrix& m);

}  // namespace vtg
