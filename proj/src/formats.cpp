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

#include "vtg/formats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vtg {

using nlohmann::json;

namespace {

constexpr char kSimTextMagic[] = "VTGSIM";
constexpr std::array<char, 8> kSimBinaryMagic = {'V', 'T', 'G', 'S', 'I', 'M', 'B', '1'};

template <typename T>
T get_as(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::Validation, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Validation, std::string("field '") + key + "': " + e.what());
  }
}

std::vector<Interval> intervals_from_json(const json& j) {
  require(j.is_array(), "intervals must be an array of [start, end] pairs");
  std::vector<Interval> out;
  for (const auto& p : j) {
    require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(),
            "interval must be a [start, end] pair of numbers");
    Interval iv{p[0].get<double>(), p[1].get<double>()};
    validate(iv);
    out.push_back(iv);
  }
  return out;
}

json intervals_to_json(const std::vector<Interval>& ivs) {
  json a = json::array();
  for (const auto& iv : ivs) a.push_back({iv.start, iv.end});
  return a;
}

std::vector<Offsets> offsets_from_json(const json& j, const char* what) {
  require(j.is_array(), std::string(what) + " must be an array of pairs");
  std::vector<Offsets> out;
  for (const auto& p : j) {
    require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(),
            std::string(what) + " entries must be pairs of numbers");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

json offsets_to_json(const std::vector<Offsets>& d) {
  json a = json::array();
  for (const auto& o : d) a.push_back({o.start, o.end});
  return a;
}

UnifiedLabel label_from_json(const json& j) {
  require(j.is_object(), "label must be an object with f, d, s");
  UnifiedLabel l;
  l.foreground = get_as<std::vector<std::uint8_t>>(j, "f");
  l.offsets = offsets_from_json(j.contains("d") ? j.at("d") : json(), "label.d");
  l.saliency = get_as<std::vector<double>>(j, "s");
  return l;
}

json label_to_json(const UnifiedLabel& l) {
  return {{"f", l.foreground}, {"d", offsets_to_json(l.offsets)}, {"s", l.saliency}};
}

}  // namespace

DatasetRecord record_from_json(const json& j) {
  require(j.is_object(), "record must be a JSON object");
  const int schema = get_as<int>(j, "schema");
  require(schema == kSchemaVersion, "unsupported schema version " + std::to_string(schema));

  DatasetRecord r;
  r.gt.video_id = get_as<std::string>(j, "video_id");
  require(!r.gt.video_id.empty(), "video_id must be non-empty");
  r.gt.query_id = j.contains("query_id") ? get_as<std::string>(j, "query_id") : std::string("0");
  r.duration = get_as<double>(j, "duration");
  const double clip_len = get_as<double>(j, "clip_len");
  r.gt.timeline = ClipTimeline::from_duration(r.duration, clip_len);

  const json& q = j.contains("query") ? j.at("query") : json();
  if (q.is_string()) {
    r.gt.query = {q.get<std::string>(), QueryKind::Sentence};
  } else {
    require(q.is_object(), "query must be a string or an object with text and kind");
    r.gt.query.text = get_as<std::string>(q, "text");
    r.gt.query.kind = q.contains("kind") ? query_kind_from_string(get_as<std::string>(q, "kind")) : QueryKind::Sentence;
  }
  require(!r.gt.query.text.empty(), "query text must be non-empty");
  r.gt.source_kind = source_kind_from_string(get_as<std::string>(j, "source_kind"));

  if (j.contains("intervals")) r.intervals = intervals_from_json(j.at("intervals"));
  if (j.contains("points")) r.points = PointAnnotation{get_as<std::vector<double>>(j, "points")};
  if (j.contains("point_queries")) r.point_queries = get_as<std::vector<std::string>>(j, "point_queries");
  if (j.contains("point_index")) r.point_index = get_as<std::size_t>(j, "point_index");
  if (j.contains("curve")) {
    r.curve = CurveAnnotation{get_as<std::vector<double>>(j, "curve")};
    require(r.curve->values.size() == r.gt.timeline.num_clips(), "curve length mismatch");
  }
  if (j.contains("highlight_positives")) {
    r.highlight_positives = get_as<std::vector<std::uint8_t>>(j, "highlight_positives");
    require(r.highlight_positives->size() == r.gt.timeline.num_clips(), "highlight_positives length mismatch");
  }
  if (j.contains("summary_clips")) r.summary_clips = get_as<std::vector<std::size_t>>(j, "summary_clips");
  if (j.contains("clip_concepts")) {
    r.clip_concepts = get_as<std::vector<std::vector<std::string>>>(j, "clip_concepts");
    require(r.clip_concepts->size() == r.gt.timeline.num_clips(), "clip_concepts length mismatch");
  }
  if (r.point_queries) {
    require(r.points && r.point_queries->size() == r.points->timestamps.size(),
            "point_queries must match points one to one");
  }

  if (j.contains("label")) {
    r.gt.label = label_from_json(j.at("label"));
    validate(r.gt.label, r.gt.timeline);
    r.has_label = true;
  } else {
    switch (r.gt.source_kind) {
      case SourceKind::Interval: require(r.intervals.has_value(), "interval record without 'intervals'"); break;
      case SourceKind::Point: require(r.points.has_value(), "point record without 'points'"); break;
      case SourceKind::Curve: require(r.curve.has_value(), "curve record without 'curve'"); break;
    }
  }
  return r;
}

json to_json(const DatasetRecord& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["video_id"] = r.gt.video_id;
  j["query_id"] = r.gt.query_id;
  j["duration"] = r.duration;
  j["clip_len"] = r.gt.timeline.clip_len();
  j["query"] = {{"text", r.gt.query.text}, {"kind", to_string(r.gt.query.kind)}};
  j["source_kind"] = to_string(r.gt.source_kind);
  if (r.intervals) j["intervals"] = intervals_to_json(*r.intervals);
  if (r.points) j["points"] = r.points->timestamps;
  if (r.point_queries) j["point_queries"] = *r.point_queries;
  if (r.point_index) j["point_index"] = *r.point_index;
  if (r.curve) j["curve"] = r.curve->values;
  if (r.highlight_positives) j["highlight_positives"] = *r.highlight_positives;
  if (r.summary_clips) j["summary_clips"] = *r.summary_clips;
  if (r.clip_concepts) j["clip_concepts"] = *r.clip_concepts;
  if (r.has_label) j["label"] = label_to_json(r.gt.label);
  return j;
}

std::vector<DatasetRecord> unify_record(const DatasetRecord& r, double curve_bin, Warnings* warnings) {
  if (r.has_label) {
    validate(r.gt.label, r.gt.timeline);
    return {r};
  }
  const ClipTimeline& tl = r.gt.timeline;
  std::vector<DatasetRecord> out;
  switch (r.gt.source_kind) {
    case SourceKind::Interval: {
      DatasetRecord u = r;
      u.gt.label = from_intervals(tl, *r.intervals, warnings);
      u.has_label = true;
      out.push_back(std::move(u));
      break;
    }
    case SourceKind::Curve: {
      DatasetRecord u = r;
      u.gt.label = from_curve(tl, *r.curve, curve_bin, warnings);
      u.has_label = true;
      out.push_back(std::move(u));
      break;
    }
    case SourceKind::Point: {
      // Labels follow the sorted, deduplicated point order.
      std::vector<double> sorted = r.points->timestamps;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      const auto labels = from_points(tl, *r.points, warnings);
      for (std::size_t k = 0; k < labels.size(); ++k) {
        DatasetRecord u = r;
        u.gt.label = labels[k];
        u.has_label = true;
        u.point_index = k;
        u.gt.query_id = r.gt.query_id + "#" + std::to_string(k);
        if (r.point_queries) {
          // Query text of the first occurrence of this timestamp.
          const auto& ts = r.points->timestamps;
          const auto pos = static_cast<std::size_t>(std::find(ts.begin(), ts.end(), sorted[k]) - ts.begin());
          u.gt.query.text = (*r.point_queries)[pos];
        }
        out.push_back(std::move(u));
      }
      break;
    }
  }
  for (const auto& u : out) validate(u.gt.label, tl);
  return out;
}

PredictionRecord prediction_from_json(const json& j) {
  require(j.is_object(), "prediction must be a JSON object");
  require(get_as<int>(j, "schema") == kSchemaVersion, "unsupported schema version");
  PredictionRecord p;
  p.video_id = get_as<std::string>(j, "video_id");
  p.query_id = j.contains("query_id") ? get_as<std::string>(j, "query_id") : std::string("0");
  p.duration = get_as<double>(j, "duration");
  p.clip_len = get_as<double>(j, "clip_len");
  p.pred.f_logits = get_as<std::vector<double>>(j, "f_logits");
  p.pred.offsets = offsets_from_json(j.contains("offsets") ? j.at("offsets") : json(), "offsets");
  p.pred.saliency = get_as<std::vector<double>>(j, "saliency");
  validate(p.pred, p.timeline());
  return p;
}

json to_json(const PredictionRecord& r) {
  return {{"schema", kSchemaVersion},
          {"video_id", r.video_id},
          {"query_id", r.query_id},
          {"duration", r.duration},
          {"clip_len", r.clip_len},
          {"f_logits", r.pred.f_logits},
          {"offsets", offsets_to_json(r.pred.offsets)},
          {"saliency", r.pred.saliency}};
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), what + " must be a non-empty array of rows");
  Matrix m(j.size(), 0);
  for (std::size_t r = 0; r < j.size(); ++r) {
    require(j[r].is_array(), what + " rows must be arrays");
    if (r == 0) {
      m.cols = j[r].size();
      require(m.cols > 0, what + " rows must be non-empty");
      m.data.resize(m.rows * m.cols);
    }
    require(j[r].size() == m.cols, what + " is ragged");
    for (std::size_t c = 0; c < m.cols; ++c) {
      require(j[r][c].is_number(), what + " entries must be numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    a.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return a;
}

SegmentInput segment_input_from_json(const json& j) {
  require(j.is_object(), "segment input must be a JSON object");
  require(get_as<int>(j, "schema") == kSchemaVersion, "unsupported schema version");
  SegmentInput s;
  s.video_id = get_as<std::string>(j, "video_id");
  if (j.contains("features")) s.features = matrix_from_json(j.at("features"), "features");
  if (j.contains("gram")) s.gram = matrix_from_json(j.at("gram"), "gram");
  require(s.features.has_value() != s.gram.has_value(), "segment input needs exactly one of features or gram");
  return s;
}

namespace {

std::uint32_t read_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) fail(ErrorKind::Validation, "truncated binary similarity file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t read_u64(std::istream& in) {
  const std::uint64_t lo = read_u32(in);
  const std::uint64_t hi = read_u32(in);
  return lo | (hi << 32);
}

std::string read_bytes(std::istream& in, std::size_t n) {
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) fail(ErrorKind::Validation, "truncated binary similarity file");
  return s;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  write_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFULL));
  write_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void read_binary_blocks(std::istream& in,
                        const std::function<void(const SimilarityBlock*, const std::string&)>& on_block) {
  while (in.peek() != std::char_traits<char>::eof()) {
    SimilarityBlock b;
    b.video_id = read_bytes(in, read_u32(in));
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    b.clip_len = std::bit_cast<double>(read_u64(in));
    for (std::uint32_t c = 0; c < cols; ++c) b.sim.concept_names.push_back(read_bytes(in, read_u32(in)));
    b.sim.values = Matrix(rows, cols);
    for (double& v : b.sim.values.data) v = static_cast<double>(std::bit_cast<float>(read_u32(in)));
    try {
      validate(b.sim);
      require(b.clip_len > 0.0 && std::isfinite(b.clip_len), "clip length must be positive");
    } catch (const Error& e) {
      on_block(nullptr, "video " + b.video_id + ": " + e.what());
      continue;
    }
    on_block(&b, "");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void read_text_blocks(std::istream& in, const std::function<void(const SimilarityBlock*, const std::string&)>& on_block) {
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream hs(line);
    std::string tag;
    SimilarityBlock b;
    std::size_t rows = 0, cols = 0;
    hs >> tag >> b.video_id >> rows >> cols >> b.clip_len;
    if (tag != "video" || !hs) {
      fail(ErrorKind::Validation, "similarity file line " + std::to_string(line_no) +
                                      ": expected 'video <id> <rows> <cols> <clip_len>'");
    }
    std::string error;
    if (!std::getline(in, line)) fail(ErrorKind::Validation, "similarity file ends inside video " + b.video_id);
    ++line_no;
    b.sim.concept_names = split(line, '\t');
    if (b.sim.concept_names.size() != cols) {
      error = "expected " + std::to_string(cols) + " concept names, got " + std::to_string(b.sim.concept_names.size());
    }
    b.sim.values = Matrix(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) fail(ErrorKind::Validation, "similarity file ends inside video " + b.video_id);
      ++line_no;
      std::istringstream rs(line);
      std::vector<double> vals;
      double v = 0.0;
      while (rs >> v) vals.push_back(v);
      if (!rs.eof()) {
        if (error.empty()) error = "unparseable value on line " + std::to_string(line_no);
        continue;
      }
      if (vals.size() != cols) {
        if (error.empty()) {
          error = "row " + std::to_string(r) + " has " + std::to_string(vals.size()) + " values, expected " +
                  std::to_string(cols);
        }
        continue;
      }
      std::copy(vals.begin(), vals.end(), b.sim.values.row(r).begin());
    }
    if (error.empty()) {
      try {
        validate(b.sim);
        require(b.clip_len > 0.0 && std::isfinite(b.clip_len), "clip length must be positive");
      } catch (const Error& e) {
        error = e.what();
      }
    }
    if (!error.empty()) {
      on_block(nullptr, "video " + b.video_id + ": " + error);
      continue;
    }
    on_block(&b, "");
  }
}

}  // namespace

void read_similarity_file(const std::string& path,
                          const std::function<void(const SimilarityBlock*, const std::string&)>& on_block) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open similarity file '" + path + "'");
  std::array<char, 8> magic{};
  in.read(magic.data(), 8);
  if (in.gcount() == 8 && magic == kSimBinaryMagic) {
    read_binary_blocks(in, on_block);
    return;
  }
  in.clear();
  in.seekg(0);
  std::string header;
  std::getline(in, header);
  if (header.rfind(kSimTextMagic, 0) != 0 || header != std::string(kSimTextMagic) + " 1") {
    fail(ErrorKind::Validation, "'" + path + "' is not a similarity file (expected 'VTGSIM 1' or binary magic)");
  }
  read_text_blocks(in, on_block);
}

void write_similarity_text(std::ostream& out, const std::vector<SimilarityBlock>& blocks) {
  for (const auto& b : blocks) {
    require(!b.video_id.empty() && std::none_of(b.video_id.begin(), b.video_id.end(),
                                                [](unsigned char c) { return std::isspace(c); }),
            "text similarity files need video ids without whitespace");
    for (const auto& name : b.sim.concept_names) {
      require(name.find_first_of("\t\n") == std::string::npos, "concept names must not contain tabs or newlines");
    }
  }
  out << kSimTextMagic << " 1\n";
  for (const auto& b : blocks) {
    json clip_len = b.clip_len;
    out << "video " << b.video_id << ' ' << b.sim.values.rows << ' ' << b.sim.values.cols << ' ' << clip_len.dump()
        << '\n';
    for (std::size_t c = 0; c < b.sim.concept_names.size(); ++c) {
      out << (c ? "\t" : "") << b.sim.concept_names[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < b.sim.values.rows; ++r) {
      for (std::size_t c = 0; c < b.sim.values.cols; ++c) {
        out << (c ? " " : "") << json(b.sim.values(r, c)).dump();
      }
      out << '\n';
    }
  }
}

void write_similarity_binary(std::ostream& out, const std::vector<SimilarityBlock>& blocks) {
  out.write(kSimBinaryMagic.data(), 8);
  for (const auto& b : blocks) {
    write_u32(out, static_cast<std::uint32_t>(b.video_id.size()));
    out.write(b.video_id.data(), static_cast<std::streamsize>(b.video_id.size()));
    write_u32(out, static_cast<std::uint32_t>(b.sim.values.rows));
    write_u32(out, static_cast<std::uint32_t>(b.sim.values.cols));
    write_u64(out, std::bit_cast<std::uint64_t>(b.clip_len));
    for (const auto& name : b.sim.concept_names) {
      write_u32(out, static_cast<std::uint32_t>(name.size()));
      out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    for (double v : b.sim.values.data) write_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

void for_each_json_line(std::istream& in,
                        const std::function<void(std::size_t, const json&, const std::string&)>& on_line) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      on_line(line_no, j, "line is not valid JSON");
      continue;
    }
    on_line(line_no, j, "");
  }
}

std::string dump_line(const json& j) { return j.dump(); }

}  // namespace vtg
