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

#include "vtg/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace vtg {

void validate(const RunConfig& cfg) {
  validate(cfg.loss);
  require(cfg.curve_bin > 0.0 && cfg.curve_bin < 1.0, "curve_bin must lie in (0, 1)");
  require(cfg.teacher_top_k >= 1, "teacher_top_k must be at least 1");
  require(cfg.nms_threshold > 0.0 && cfg.nms_threshold <= 1.0, "nms_threshold must lie in (0, 1]");
  require(cfg.highlight_k >= 1, "highlight_k must be at least 1");
  require(cfg.kts_max_segments >= 1 && cfg.kts_max_clips >= 1, "KTS limits must be positive");
  require(cfg.kts_penalty >= 0.0, "kts_penalty must be non-negative");
  require(cfg.summary_budget > 0.0 && cfg.summary_budget <= 1.0, "summary_budget must lie in (0, 1]");
  for (double t : cfg.map_thresholds) require(t > 0.0 && t <= 1.0, "map thresholds must lie in (0, 1]");
  for (double t : cfg.recall_thresholds) require(t > 0.0 && t <= 1.0, "recall thresholds must lie in (0, 1]");
  require(cfg.recall_k >= 1, "recall_k must be at least 1");
  require(cfg.fit_learning_rate > 0.0, "fit_learning_rate must be positive");
  require(cfg.fit_embed_dim >= 1, "fit_embed_dim must be at least 1");
  require(cfg.losscheck_epsilon > 0.0, "losscheck_epsilon must be positive");
  require(cfg.losscheck_tolerance >= 0.0, "losscheck_tolerance must be non-negative");
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["loss"] = {
      {"lambda_f", cfg.loss.lambda_f},         {"lambda_l1", cfg.loss.lambda_l1},
      {"lambda_iou", cfg.loss.lambda_iou},     {"lambda_inter", cfg.loss.lambda_inter},
      {"lambda_intra", cfg.loss.lambda_intra}, {"tau", cfg.loss.tau},
      {"neg_weight", cfg.loss.neg_weight},     {"beta", cfg.loss.beta},
      {"aggregation", to_string(cfg.aggregation)},
  };
  j["teacher"] = {{"curve_bin", cfg.curve_bin}, {"top_k", cfg.teacher_top_k}};
  j["decode"] = {
      {"nms_threshold", cfg.nms_threshold},
      {"moment_top_k", cfg.moment_top_k},
      {"moment_add_saliency", cfg.moment_add_saliency},
      {"highlight_mode", to_string(cfg.highlight_mode)},
      {"highlight_k", cfg.highlight_k},
      {"kts_max_segments", cfg.kts_max_segments},
      {"kts_max_clips", cfg.kts_max_clips},
      {"kts_penalty", cfg.kts_penalty},
      {"segment_aggregate", to_string(cfg.segment_aggregate)},
      {"summary_budget", cfg.summary_budget},
  };
  j["eval"] = {
      {"map_thresholds", cfg.map_thresholds},
      {"recall_thresholds", cfg.recall_thresholds},
      {"recall_k", cfg.recall_k},
  };
  j["fit"] = {{"steps", cfg.fit_steps}, {"learning_rate", cfg.fit_learning_rate}, {"embed_dim", cfg.fit_embed_dim}};
  j["losscheck"] = {{"points", cfg.losscheck_points},
                    {"epsilon", cfg.losscheck_epsilon},
                    {"tolerance", cfg.losscheck_tolerance}};
  j["seed"] = cfg.seed;
  return j;
}

namespace {

// Reads `key` from `obj` into `out` if present and records it as consumed.
template <typename T>
void take(const nlohmann::json& obj, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    require(seen.count(k) > 0, "unknown config key '" + where + k + "'");
  }
}

const nlohmann::json& section(const nlohmann::json& j, const char* name, std::set<std::string>& seen) {
  static const nlohmann::json empty = nlohmann::json::object();
  seen.insert(name);
  if (!j.contains(name)) return empty;
  require(j.at(name).is_object(), std::string("config section '") + name + "' must be an object");
  return j.at(name);
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  require(j.is_object(), "config must be a JSON object");
  RunConfig cfg;
  std::set<std::string> top;

  {
    const auto& s = section(j, "loss", top);
    std::set<std::string> seen;
    take(s, "lambda_f", cfg.loss.lambda_f, seen);
    take(s, "lambda_l1", cfg.loss.lambda_l1, seen);
    take(s, "lambda_iou", cfg.loss.lambda_iou, seen);
    take(s, "lambda_inter", cfg.loss.lambda_inter, seen);
    take(s, "lambda_intra", cfg.loss.lambda_intra, seen);
    take(s, "tau", cfg.loss.tau, seen);
    take(s, "neg_weight", cfg.loss.neg_weight, seen);
    take(s, "beta", cfg.loss.beta, seen);
    std::string agg = to_string(cfg.aggregation);
    take(s, "aggregation", agg, seen);
    cfg.aggregation = aggregation_from_string(agg);
    reject_unknown(s, seen, "loss.");
  }
  {
    const auto& s = section(j, "teacher", top);
    std::set<std::string> seen;
    take(s, "curve_bin", cfg.curve_bin, seen);
    take(s, "top_k", cfg.teacher_top_k, seen);
    reject_unknown(s, seen, "teacher.");
  }
  {
    const auto& s = section(j, "decode", top);
    std::set<std::string> seen;
    take(s, "nms_threshold", cfg.nms_threshold, seen);
    take(s, "moment_top_k", cfg.moment_top_k, seen);
    take(s, "moment_add_saliency", cfg.moment_add_saliency, seen);
    std::string mode = to_string(cfg.highlight_mode);
    take(s, "highlight_mode", mode, seen);
    cfg.highlight_mode = highlight_mode_from_string(mode);
    take(s, "highlight_k", cfg.highlight_k, seen);
    take(s, "kts_max_segments", cfg.kts_max_segments, seen);
    take(s, "kts_max_clips", cfg.kts_max_clips, seen);
    take(s, "kts_penalty", cfg.kts_penalty, seen);
    std::string agg = to_string(cfg.segment_aggregate);
    take(s, "segment_aggregate", agg, seen);
    cfg.segment_aggregate = segment_aggregate_from_string(agg);
    take(s, "summary_budget", cfg.summary_budget, seen);
    reject_unknown(s, seen, "decode.");
  }
  {
    const auto& s = section(j, "eval", top);
    std::set<std::string> seen;
    take(s, "map_thresholds", cfg.map_thresholds, seen);
    take(s, "recall_thresholds", cfg.recall_thresholds, seen);
    take(s, "recall_k", cfg.recall_k, seen);
    reject_unknown(s, seen, "eval.");
  }
  {
    const auto& s = section(j, "fit", top);
    std::set<std::string> seen;
    take(s, "steps", cfg.fit_steps, seen);
    take(s, "learning_rate", cfg.fit_learning_rate, seen);
    take(s, "embed_dim", cfg.fit_embed_dim, seen);
    reject_unknown(s, seen, "fit.");
  }
  {
    const auto& s = section(j, "losscheck", top);
    std::set<std::string> seen;
    take(s, "points", cfg.losscheck_points, seen);
    take(s, "epsilon", cfg.losscheck_epsilon, seen);
    take(s, "tolerance", cfg.losscheck_tolerance, seen);
    reject_unknown(s, seen, "losscheck.");
  }
  take(j, "seed", cfg.seed, top);
  reject_unknown(j, top, "");
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, "config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace vtg
