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

#include "vtg/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "vtg/formats.hpp"
#include "vtg/grad_check.hpp"
#include "vtg/overfit.hpp"
#include "vtg/random.hpp"

namespace vtg {

using nlohmann::json;

const char* to_string(DecodeTask t) {
  switch (t) {
    case DecodeTask::Moments: return "moments";
    case DecodeTask::Highlights: return "highlights";
    case DecodeTask::Summary: return "summary";
  }
  return "?";
}

DecodeTask decode_task_from_string(const std::string& s) {
  if (s == "moments") return DecodeTask::Moments;
  if (s == "highlights") return DecodeTask::Highlights;
  if (s == "summary") return DecodeTask::Summary;
  fail(ErrorKind::Validation, "unknown task '" + s + "' (expected moments, highlights or summary)");
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("VTG_NUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr std::size_t kChunkLines = 1024;

// Runs fn(i) for i in [0, n) on up to worker_threads() threads. `fn` must not throw.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t threads = std::min(worker_threads(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open input file '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open output file '" + path + "'");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

std::string record_key(const std::string& video_id, const std::string& query_id) {
  return video_id + "/" + query_id;
}

std::string threshold_key(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

// Per-record transform applied while streaming a JSON Lines file.
using Transform = std::function<std::vector<json>(const json& in, Warnings& warnings)>;

struct StreamStats {
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  json errors = json::array();
  json warnings = json::array();
};

// Streams `in` to `out` in chunks; records inside a chunk run in parallel and
// are written back in input order.
void stream_transform(std::istream& in, std::ostream& out, const Transform& transform, StreamStats& stats) {
  struct Slot {
    std::size_t line_no = 0;
    std::string text;
    std::vector<json> outputs;
    Warnings warnings;
    std::string error;
  };
  std::string line;
  std::size_t line_no = 0;
  bool eof = false;
  while (!eof) {
    std::vector<Slot> chunk;
    while (chunk.size() < kChunkLines) {
      if (!std::getline(in, line)) {
        eof = true;
        break;
      }
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      chunk.push_back({line_no, line, {}, {}, {}});
    }
    parallel_for(chunk.size(), [&](std::size_t i) {
      Slot& s = chunk[i];
      const json j = json::parse(s.text, nullptr, false);
      if (j.is_discarded()) {
        s.error = "line is not valid JSON";
        return;
      }
      try {
        s.outputs = transform(j, s.warnings);
      } catch (const std::exception& e) {
        s.error = e.what();
        s.outputs.clear();
      }
    });
    for (const Slot& s : chunk) {
      ++stats.records_in;
      if (!s.error.empty()) {
        stats.errors.push_back({{"line", s.line_no}, {"error", s.error}});
        continue;
      }
      for (const auto& w : s.warnings) stats.warnings.push_back({{"line", s.line_no}, {"warning", w}});
      for (const auto& o : s.outputs) {
        out << dump_line(o) << '\n';
        ++stats.records_out;
      }
    }
  }
}

// Reads every record of a dataset file and labels it.
std::vector<DatasetRecord> load_dataset(const std::string& path, double curve_bin, json& errors, json& warnings) {
  auto in = open_input(path);
  std::vector<DatasetRecord> out;
  for_each_json_line(in, [&](std::size_t line_no, const json& j, const std::string& parse_error) {
    if (!parse_error.empty()) {
      errors.push_back({{"line", line_no}, {"error", parse_error}});
      return;
    }
    try {
      Warnings w;
      auto recs = unify_record(record_from_json(j), curve_bin, &w);
      for (const auto& msg : w) warnings.push_back({{"line", line_no}, {"warning", msg}});
      for (auto& r : recs) out.push_back(std::move(r));
    } catch (const Error& e) {
      errors.push_back({{"line", line_no}, {"error", e.what()}});
    }
  });
  return out;
}

template <typename Body>
CommandResult run_command(const char* name, Body&& body) {
  CommandResult res;
  res.report = {{"command", name}};
  try {
    body(res);
  } catch (const Error& e) {
    res.status = e.kind() == ErrorKind::Io ? ExitStatus::Io : ExitStatus::Validation;
    res.report["error"] = e.what();
  } catch (const std::exception& e) {
    res.status = ExitStatus::Validation;
    res.report["error"] = e.what();
  }
  return res;
}

}  // namespace

CommandResult cmd_convert(const RunConfig& cfg, const std::string& input, const std::string& output,
                          bool skip_invalid) {
  return run_command("convert", [&](CommandResult& res) {
    validate(cfg);
    auto in = open_input(input);
    auto out = open_output(output);
    StreamStats stats;
    stream_transform(in, out, [&](const json& j, Warnings& w) {
      std::vector<json> lines;
      for (const auto& r : unify_record(record_from_json(j), cfg.curve_bin, &w)) lines.push_back(to_json(r));
      return lines;
    }, stats);
    finish_output(out, output);
    res.report["records_in"] = stats.records_in;
    res.report["records_out"] = stats.records_out;
    res.report["skip_invalid"] = skip_invalid;
    res.report["errors"] = stats.errors;
    res.report["warnings"] = stats.warnings;
    if (!stats.errors.empty() && !skip_invalid) res.status = ExitStatus::Validation;
  });
}

CommandResult cmd_teacher(const RunConfig& cfg, const std::string& similarity, const std::string& output) {
  return run_command("teacher", [&](CommandResult& res) {
    validate(cfg);
    auto out = open_output(output);
    json errors = json::array();
    json warnings = json::array();
    std::size_t videos = 0;
    std::size_t records = 0;
    read_similarity_file(similarity, [&](const SimilarityBlock* b, const std::string& error) {
      ++videos;
      if (!b) {
        errors.push_back({{"block", videos}, {"error", error}});
        return;
      }
      try {
        const ClipTimeline tl(b->sim.values.rows, b->clip_len);
        Warnings w;
        const auto labels = pseudo_labels(tl, b->sim, cfg.teacher_top_k, cfg.curve_bin, &w);
        for (const auto& msg : w) warnings.push_back({{"video_id", b->video_id}, {"warning", msg}});
        for (std::size_t rank = 0; rank < labels.size(); ++rank) {
          DatasetRecord r;
          r.gt.video_id = b->video_id;
          r.gt.query_id = "c" + std::to_string(rank);
          r.gt.timeline = tl;
          r.gt.query = labels[rank].query;
          r.gt.label = labels[rank].label;
          r.gt.source_kind = SourceKind::Curve;
          r.duration = tl.duration();
          r.curve = labels[rank].curve;
          r.has_label = true;
          out << dump_line(to_json(r)) << '\n';
          ++records;
        }
      } catch (const Error& e) {
        errors.push_back({{"block", videos}, {"video_id", b->video_id}, {"error", e.what()}});
      }
    });
    finish_output(out, output);
    res.report["videos"] = videos;
    res.report["records_out"] = records;
    res.report["top_k"] = cfg.teacher_top_k;
    res.report["errors"] = errors;
    res.report["warnings"] = warnings;
    if (!errors.empty()) res.status = ExitStatus::Validation;
  });
}

CommandResult cmd_losscheck(const RunConfig& cfg) {
  return run_command("losscheck", [&](CommandResult& res) {
    validate(cfg);
    const auto losses = all_checked_losses();
    std::vector<LossCheckSummary> summaries(losses.size());
    std::vector<std::string> errors(losses.size());
    parallel_for(losses.size(), [&](std::size_t i) {
      try {
        summaries[i] = check_loss(losses[i], cfg.losscheck_points, derive_seed(cfg.seed, i), cfg.loss,
                                  cfg.losscheck_epsilon, cfg.losscheck_tolerance);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    json rows = json::array();
    bool all_passed = true;
    for (std::size_t i = 0; i < losses.size(); ++i) {
      if (!errors[i].empty()) fail(ErrorKind::Validation, std::string(to_string(losses[i])) + ": " + errors[i]);
      const auto& s = summaries[i];
      all_passed = all_passed && s.passed();
      rows.push_back({{"loss", to_string(losses[i])},
                      {"checked", s.checked},
                      {"skipped", s.skipped},
                      {"failed", s.failed},
                      {"max_rel_error", s.max_rel_error},
                      {"passed", s.passed()}});
    }
    res.report["points"] = cfg.losscheck_points;
    res.report["epsilon"] = cfg.losscheck_epsilon;
    res.report["tolerance"] = cfg.losscheck_tolerance;
    res.report["seed"] = cfg.seed;
    res.report["losses"] = rows;
    res.report["passed"] = all_passed;
    if (!all_passed) res.status = ExitStatus::Validation;
  });
}

CommandResult cmd_fit(const RunConfig& cfg, const std::string& dataset, const std::string& output) {
  return run_command("fit", [&](CommandResult& res) {
    validate(cfg);
    json errors = json::array();
    json warnings = json::array();
    const auto records = load_dataset(dataset, cfg.curve_bin, errors, warnings);
    res.report["errors"] = errors;
    res.report["warnings"] = warnings;
    if (!errors.empty()) {
      res.status = ExitStatus::Validation;
      return;
    }
    std::vector<GroundTruthRecord> gts;
    for (const auto& r : records) gts.push_back(r.gt);

    OverfitOptions opt;
    opt.steps = cfg.fit_steps;
    opt.learning_rate = cfg.fit_learning_rate;
    opt.embed_dim = cfg.fit_embed_dim;
    opt.seed = cfg.seed;
    opt.aggregation = cfg.aggregation;
    const OverfitResult fit = overfit(gts, cfg.loss, opt);

    auto out = open_output(output);
    for (std::size_t i = 0; i < records.size(); ++i) {
      PredictionRecord p;
      p.video_id = records[i].gt.video_id;
      p.query_id = records[i].gt.query_id;
      p.duration = records[i].duration;
      p.clip_len = records[i].gt.timeline.clip_len();
      p.pred = fit.predictions[i];
      out << dump_line(to_json(p)) << '\n';
    }
    finish_output(out, output);

    bool monotone = true;
    for (std::size_t i = 1; i < fit.trajectory.size(); ++i) monotone = monotone && fit.trajectory[i] <= fit.trajectory[i - 1];
    res.report["records"] = records.size();
    res.report["steps"] = cfg.fit_steps;
    res.report["accepted_steps"] = fit.accepted_steps;
    res.report["stalled"] = fit.converged;
    res.report["initial_loss"] = fit.trajectory.front();
    res.report["final_loss"] = fit.trajectory.back();
    res.report["monotone"] = monotone;
    res.report["trajectory"] = fit.trajectory;
  });
}

CommandResult cmd_decode(const RunConfig& cfg, const std::string& predictions, DecodeTask task,
                         const std::string& output, const std::string& segments) {
  return run_command("decode", [&](CommandResult& res) {
    validate(cfg);
    res.report["task"] = to_string(task);
    std::unordered_map<std::string, SegmentInput> seg_inputs;
    if (task == DecodeTask::Summary) {
      if (segments.empty()) {
        fail(ErrorKind::Validation,
             "summary decoding needs KTS input: pass a file of per-video clip features or Gram matrices");
      }
      auto in = open_input(segments);
      for_each_json_line(in, [&](std::size_t line_no, const json& j, const std::string& err) {
        const std::string where = "segment input line " + std::to_string(line_no) + ": ";
        if (!err.empty()) fail(ErrorKind::Validation, where + err);
        try {
          SegmentInput s = segment_input_from_json(j);
          const std::string id = s.video_id;
          require(seg_inputs.emplace(id, std::move(s)).second, "duplicate video_id '" + id + "'");
        } catch (const Error& e) {
          fail(ErrorKind::Validation, where + e.what());
        }
      });
    }
    auto in = open_input(predictions);
    auto out = open_output(output);
    StreamStats stats;
    stream_transform(in, out, [&](const json& j, Warnings& w) -> std::vector<json> {
      const PredictionRecord p = prediction_from_json(j);
      const ClipTimeline tl = p.timeline();
      json o = {{"schema", kSchemaVersion},
                {"video_id", p.video_id},
                {"query_id", p.query_id},
                {"task", to_string(task)},
                {"duration", p.duration},
                {"clip_len", p.clip_len}};
      switch (task) {
        case DecodeTask::Moments: {
          MomentOptions mo{cfg.nms_threshold, cfg.moment_top_k, cfg.moment_add_saliency};
          json moments = json::array();
          for (const auto& m : decode_moments(p.pred, tl, mo)) {
            moments.push_back({m.interval.start, m.interval.end, m.score});
          }
          o["moments"] = moments;
          break;
        }
        case DecodeTask::Highlights: {
          o["clips"] = decode_highlights(p.pred, cfg.highlight_mode, cfg.highlight_k, &w);
          o["clip_scores"] = highlight_scores(p.pred, cfg.highlight_mode);
          break;
        }
        case DecodeTask::Summary: {
          auto it = seg_inputs.find(p.video_id);
          require(it != seg_inputs.end(), "no segment features or Gram matrix for video '" + p.video_id + "'");
          const Matrix gram = it->second.gram ? *it->second.gram : gram_from_features(*it->second.features);
          require(gram.rows == tl.num_clips(), "segment input for video '" + p.video_id + "' has " +
                                                   std::to_string(gram.rows) + " clips, predictions have " +
                                                   std::to_string(tl.num_clips()));
          KtsOptions ko;
          ko.max_segments = cfg.kts_max_segments;
          ko.max_clips = cfg.kts_max_clips;
          ko.penalty = cfg.kts_penalty;
          const KtsResult kts = kts_segment(gram, ko);
          const SummaryResult sum = decode_summary(p.pred, kts.segments, cfg.summary_budget, cfg.segment_aggregate);
          o["clips"] = sum.clips;
          o["segments"] = kts.segments.starts;
          o["segment_scores"] = sum.segment_scores;
          o["budget"] = sum.budget;
          break;
        }
      }
      return {o};
    }, stats);
    finish_output(out, output);
    res.report["records_in"] = stats.records_in;
    res.report["records_out"] = stats.records_out;
    res.report["errors"] = stats.errors;
    res.report["warnings"] = stats.warnings;
    if (!stats.errors.empty()) res.status = ExitStatus::Validation;
  });
}

namespace {

std::vector<Interval> ground_truth_moments(const DatasetRecord& r) {
  if (r.gt.source_kind == SourceKind::Interval && r.intervals) return *r.intervals;
  return intervals_of(r.gt.timeline, r.gt.label);
}

std::vector<std::uint8_t> highlight_positives(const DatasetRecord& r) {
  return r.highlight_positives ? *r.highlight_positives : r.gt.label.foreground;
}

SummaryEvalItem summary_item(const DatasetRecord& r, const json& decoded) {
  SummaryEvalItem item;
  const std::size_t n = r.gt.timeline.num_clips();
  for (std::size_t c : decoded.at("clips").get<std::vector<std::size_t>>()) {
    require(c < n, "decoded clip index " + std::to_string(c) + " out of range");
    item.predicted.insert(c);
  }
  if (r.summary_clips) {
    for (std::size_t c : *r.summary_clips) {
      require(c < n, "summary clip index " + std::to_string(c) + " out of range");
      item.ground_truth.insert(c);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (r.gt.label.foreground[i]) item.ground_truth.insert(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (r.clip_concepts) {
      item.clip_concepts[i] = std::set<std::string>((*r.clip_concepts)[i].begin(), (*r.clip_concepts)[i].end());
    } else {
      item.clip_concepts[i] = {"clip:" + std::to_string(i)};
    }
  }
  return item;
}

}  // namespace

CommandResult cmd_eval(const RunConfig& cfg, const std::string& decoded, const std::string& ground_truth,
                       DecodeTask task) {
  return run_command("eval", [&](CommandResult& res) {
    validate(cfg);
    res.report["task"] = to_string(task);
    json errors = json::array();
    json warnings = json::array();
    std::map<std::string, DatasetRecord> gt;
    for (auto& r : load_dataset(ground_truth, cfg.curve_bin, errors, warnings)) {
      const std::string key = record_key(r.gt.video_id, r.gt.query_id);
      if (!gt.emplace(key, std::move(r)).second) {
        errors.push_back({{"error", "duplicate ground-truth record " + key}});
      }
    }

    std::vector<std::pair<std::string, json>> preds;
    std::set<std::string> seen;
    auto in = open_input(decoded);
    for_each_json_line(in, [&](std::size_t line_no, const json& j, const std::string& err) {
      if (!err.empty()) {
        errors.push_back({{"line", line_no}, {"error", err}});
        return;
      }
      try {
        require(j.is_object() && j.value("schema", 0) == kSchemaVersion, "unsupported or missing schema version");
        require(j.value("task", std::string()) == to_string(task),
                std::string("decoded record is not a ") + to_string(task) + " record");
        const std::string key =
            record_key(j.at("video_id").get<std::string>(), j.value("query_id", std::string("0")));
        require(seen.insert(key).second, "duplicate decoded record " + key);
        preds.emplace_back(key, j);
      } catch (const std::exception& e) {
        errors.push_back({{"line", line_no}, {"error", e.what()}});
      }
    });

    json missing_gt = json::array();
    json missing_pred = json::array();
    for (const auto& [key, j] : preds) {
      if (!gt.count(key)) missing_gt.push_back(key);
    }
    for (const auto& [key, r] : gt) {
      if (!seen.count(key)) missing_pred.push_back(key);
    }
    res.report["warnings"] = warnings;
    if (!missing_gt.empty() || !missing_pred.empty()) {
      errors.push_back({{"error", "decoded and ground-truth records do not match"},
                        {"without_ground_truth", missing_gt},
                        {"without_prediction", missing_pred}});
    }
    if (!errors.empty()) {
      res.report["errors"] = errors;
      res.status = ExitStatus::Validation;
      return;
    }
    res.report["errors"] = errors;
    res.report["count"] = preds.size();

    try {
      switch (task) {
        case DecodeTask::Moments: {
          std::vector<MomentEvalItem> items;
          for (const auto& [key, j] : preds) {
            MomentEvalItem item;
            item.query_id = key;
            for (const auto& m : j.at("moments")) {
              require(m.is_array() && m.size() == 3, "moments must be [start, end, score] triples");
              item.predictions.push_back({{m[0].get<double>(), m[1].get<double>()}, m[2].get<double>()});
            }
            item.ground_truths = ground_truth_moments(gt.at(key));
            require(!item.ground_truths.empty(), "ground truth " + key + " has no foreground moment");
            items.push_back(std::move(item));
          }
          const RecallReport rec = recall_at_k(items, cfg.recall_k, cfg.recall_thresholds);
          json recall = json::object();
          for (const auto& [t, v] : rec.recall) recall["R" + std::to_string(cfg.recall_k) + "@" + threshold_key(t)] = v;
          const MapReport map = moment_map(items, cfg.map_thresholds);
          json maps = json::object();
          for (const auto& [t, v] : map.map) maps["mAP@" + threshold_key(t)] = v;
          res.report["recall"] = recall;
          res.report["miou"] = rec.miou;
          res.report["map"] = maps;
          res.report["map_avg"] = map.average;
          res.report["protocol"] = {
              {"recall", "top-k predictions by score; hit when any reaches the IoU threshold"},
              {"miou", "IoU of the top-1 prediction with its best ground-truth moment"},
              {"map", "non-interpolated AP per query, greedy one-to-one matching by score"},
          };
          break;
        }
        case DecodeTask::Highlights: {
          std::vector<HighlightEvalItem> items;
          std::size_t excluded = 0;
          for (const auto& [key, j] : preds) {
            HighlightEvalItem item;
            item.query_id = key;
            item.clip_scores = j.at("clip_scores").get<std::vector<double>>();
            item.positives = highlight_positives(gt.at(key));
            require(item.clip_scores.size() == item.positives.size(),
                    "clip_scores length of " + key + " does not match its ground truth");
            if (std::count(item.positives.begin(), item.positives.end(), 1) == 0) {
              ++excluded;
              continue;
            }
            items.push_back(std::move(item));
          }
          if (excluded > 0) {
            warnings.push_back({{"warning", std::to_string(excluded) + " queries without positive clips excluded"}});
          }
          res.report["warnings"] = warnings;
          res.report["hit_at_1"] = hit_at_1(items).hit_at_1;
          res.report["map"] = highlight_map(items);
          res.report["top5_map"] = top5_map(items);
          res.report["excluded_without_positives"] = excluded;
          res.report["protocol"] = {
              {"hit_at_1", "top-scored clip, earliest clip on ties"},
              {"map", "AP over the full clip ranking"},
              {"top5_map", "protocol: reconstructed (AP over the top 5 clips, recall denominator min(5, #positives))"},
              {"exclusion", "queries without positive clips are excluded from every metric"},
          };
          break;
        }
        case DecodeTask::Summary: {
          double p = 0.0, r = 0.0, f = 0.0;
          json per = json::array();
          for (const auto& [key, j] : preds) {
            const SummaryScore s = qfvs_f1(summary_item(gt.at(key), j));
            for (const auto& msg : s.warnings) warnings.push_back({{"record", key}, {"warning", msg}});
            p += s.precision;
            r += s.recall;
            f += s.f1;
            per.push_back({{"record", key}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}});
          }
          const double n = preds.empty() ? 1.0 : static_cast<double>(preds.size());
          res.report["precision"] = p / n;
          res.report["recall"] = r / n;
          res.report["f1"] = f / n;
          res.report["per_record"] = per;
          res.report["warnings"] = warnings;
          res.report["protocol"] = {
              {"f1", "maximum-weight bipartite matching with concept-IoU edge weights"},
              {"defaults", "ground truth falls back to foreground clips; concepts to one per clip"},
          };
          break;
        }
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Validation, std::string("malformed decoded record: ") + e.what());
    }
  });
}

}  // namespace vtg
