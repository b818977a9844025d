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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vtg {

enum class ErrorKind { Validation, Index, Io };

/// Every failure raised by the core carries a kind so the C layer can map it
/// onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);
inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::Validation, what);
}

/// Non-fatal conditions (empty label, vacuous loss, ...) are appended here
/// when the caller passes a sink.
using Warnings = std::vector<std::string>;
void warn(Warnings* sink, std::string msg);

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// A video cut into `num_clips` fixed-length clips with centred timestamps.
class ClipTimeline {
 public:
  ClipTimeline(std::size_t num_clips, double clip_len);

  /// Truncates to floor(duration / clip_len) clips, never fewer than one.
  static ClipTimeline from_duration(double duration, double clip_len);

  std::size_t num_clips() const noexcept { return num_clips_; }
  double clip_len() const noexcept { return clip_len_; }
  double duration() const noexcept { return static_cast<double>(num_clips_) * clip_len_; }

  /// Centre of clip i, (i + 0.5) * clip_len. Throws an index error when out of range.
  double timestamp(std::size_t i) const;
  double clip_start(std::size_t i) const { return static_cast<double>(i) * clip_len_; }
  double clip_end(std::size_t i) const { return static_cast<double>(i + 1) * clip_len_; }

  bool operator==(const ClipTimeline&) const = default;

 private:
  std::size_t num_clips_;
  double clip_len_;
};

struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - start; }
  bool operator==(const Interval&) const = default;
};

/// Throws unless start <= end and both are finite.
void validate(const Interval& iv);

Interval clamp_to(const Interval& iv, double lo, double hi);

/// |a ∩ b| / |a ∪ b|. Identical degenerate intervals score 1, any other
/// zero-union pair scores 0.
double temporal_iou(const Interval& a, const Interval& b);

/// Distances from a clip timestamp back to the start and forward to the end.
struct Offsets {
  double start = 0.0;
  double end = 0.0;
  bool operator==(const Offsets&) const = default;
};

/// Per-clip (foreground, offsets, saliency) triple.
///
/// Background clips always hold offsets (0, 0) and saliency 0; `offsets_valid`
/// is derived from the foreground flag so a background offset can never be
/// mistaken for a real one.
struct UnifiedLabel {
  std::vector<std::uint8_t> foreground;
  std::vector<Offsets> offsets;
  std::vector<double> saliency;

  std::size_t size() const noexcept { return foreground.size(); }
  bool offsets_valid(std::size_t i) const { return foreground.at(i) != 0; }
  std::size_t foreground_count() const;

  static UnifiedLabel background(std::size_t n);
  bool operator==(const UnifiedLabel&) const = default;
};

/// Checks lengths, the f/s coupling, null background offsets, and that every
/// foreground boundary lies inside the video once clamped.
void validate(const UnifiedLabel& label, const ClipTimeline& timeline);

/// Offsets of clip i with respect to an interval that should contain t_i.
Offsets offsets_from(const ClipTimeline& timeline, std::size_t i, const Interval& iv);

/// [t_i - d_start, t_i + d_end] clamped to [0, duration]. Rejects background clips.
Interval boundary_of(const ClipTimeline& timeline, const UnifiedLabel& label, std::size_t i);

enum class QueryKind { Sentence, Title, DomainName, Keywords, Concept };

struct Query {
  std::string text;
  QueryKind kind = QueryKind::Sentence;
};

const char* to_string(QueryKind kind);
QueryKind query_kind_from_string(const std::string& s);

/// Model-side outputs: foreground logits, offset pairs, and cosine saliency.
struct PredictionSet {
  std::vector<double> f_logits;
  std::vector<Offsets> offsets;
  std::vector<double> saliency;

  std::size_t size() const noexcept { return f_logits.size(); }
};

void validate(const PredictionSet& pred, const ClipTimeline& timeline);

enum class SourceKind { Point, Interval, Curve };

const char* to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& s);

struct GroundTruthRecord {
  std::string video_id;
  std::string query_id;
  ClipTimeline timeline{1, 1.0};
  Query query;
  UnifiedLabel label;
  SourceKind source_kind = SourceKind::Interval;
};

double sigmoid(double x);

}  // namespace vtg
