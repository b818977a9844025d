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

// vtg: command-line front end over the C API.
//
//   vtg convert   INPUT   -o OUT [--skip-invalid]
//   vtg teacher   SIMFILE -o OUT [--k K]
//   vtg losscheck         [-o REPORT] [--points N] [--tolerance T]
//   vtg fit       DATASET -o OUT
//   vtg decode    PREDS   -o OUT --task moments|highlights|summary [--features F]
//   vtg eval      DECODED GROUND_TRUTH --task ... [-o REPORT]
//   vtg config            [-o OUT]
//
// Exit status: 0 success, 1 validation failure, 2 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vtg/vtg.h"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string report;
};

void add_common(CLI::App* cmd, Common& c, bool output_required) {
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--seed", c.seed, "Seed override");
  auto* out = cmd->add_option("-o,--output", c.output, "Output file");
  if (output_required) out->required();
  cmd->add_option("--report", c.report, "Write the JSON report here instead of stdout");
}

int exit_code(vtg_status st) {
  switch (st) {
    case VTG_OK: return 0;
    case VTG_ERR_IO: return 2;
    default: return 1;
  }
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << '\n';
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text << '\n';
  return static_cast<bool>(out);
}

class Session {
 public:
  Session() {
    if (vtg_context_create(&ctx_) != VTG_OK) ctx_ = nullptr;
  }
  ~Session() { vtg_context_destroy(ctx_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  vtg_context* get() const { return ctx_; }

  vtg_status configure(const Common& c, const nlohmann::json& overrides) {
    if (!c.config.empty()) {
      if (const vtg_status st = vtg_context_load_config(ctx_, c.config.c_str()); st != VTG_OK) return st;
    }
    if (!overrides.empty()) {
      nlohmann::json cfg = nlohmann::json::parse(vtg_context_config_json(ctx_));
      cfg.merge_patch(overrides);
      if (const vtg_status st = vtg_context_set_config_json(ctx_, cfg.dump().c_str()); st != VTG_OK) return st;
    }
    if (c.seed) return vtg_context_set_seed(ctx_, *c.seed);
    return VTG_OK;
  }

  // Emits the report and any error, returning the process exit code.
  int finish(vtg_status st, const std::string& report_path) const {
    const std::string report = nlohmann::json::parse(vtg_context_report(ctx_)).dump(2);
    if (report != "{}" && !write_text(report_path, report)) {
      std::cerr << "vtg: cannot write report\n";
      return 2;
    }
    if (st != VTG_OK) std::cerr << "vtg: " << vtg_status_string(st) << ": " << vtg_context_last_error(ctx_) << '\n';
    return exit_code(st);
  }

  int fail_early(vtg_status st) const {
    std::cerr << "vtg: " << vtg_status_string(st) << ": " << vtg_context_last_error(ctx_) << '\n';
    return exit_code(st);
  }

 private:
  vtg_context* ctx_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unified video temporal grounding toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vtg_version()));

  Common common;
  std::string input, second, task;
  std::optional<std::size_t> k, points;
  std::optional<double> tolerance;
  std::string features;
  bool skip_invalid = false;

  auto* convert = app.add_subcommand("convert", "Attach unified labels to a dataset file");
  convert->add_option("input", input, "Dataset file")->required();
  convert->add_flag("--skip-invalid", skip_invalid, "Drop bad records instead of failing");
  add_common(convert, common, true);

  auto* teacher = app.add_subcommand("teacher", "Pseudo labels from a clip-concept similarity file");
  teacher->add_option("similarity", input, "Similarity file (text or binary)")->required();
  teacher->add_option("--k", k, "Concepts per video");
  add_common(teacher, common, true);

  auto* losscheck = app.add_subcommand("losscheck", "Finite-difference check of every loss gradient");
  losscheck->add_option("--points", points, "Points per loss");
  losscheck->add_option("--tolerance", tolerance, "Maximum relative error");
  add_common(losscheck, common, false);

  auto* fit = app.add_subcommand("fit", "Overfit free per-clip parameters to a dataset");
  fit->add_option("dataset", input, "Dataset file")->required();
  add_common(fit, common, true);

  auto* decode = app.add_subcommand("decode", "Decode predictions into task outputs");
  decode->add_option("predictions", input, "Prediction file")->required();
  decode->add_option("--task", task, "moments, highlights or summary")->required();
  decode->add_option("--features", features, "Per-video features or Gram matrices for summary");
  add_common(decode, common, true);

  auto* eval = app.add_subcommand("eval", "Score decoded outputs against ground truth");
  eval->add_option("decoded", input, "Decoded file")->required();
  eval->add_option("ground_truth", second, "Ground-truth dataset file")->required();
  eval->add_option("--task", task, "moments, highlights or summary")->required();
  add_common(eval, common, false);

  auto* config = app.add_subcommand("config", "Print the effective configuration");
  add_common(config, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Session s;
  if (!s.get()) {
    std::cerr << "vtg: cannot create context\n";
    return 1;
  }

  nlohmann::json overrides = nlohmann::json::object();
  if (k) overrides["teacher"]["top_k"] = *k;
  if (points) overrides["losscheck"]["points"] = *points;
  if (tolerance) overrides["losscheck"]["tolerance"] = *tolerance;
  if (const vtg_status st = s.configure(common, overrides); st != VTG_OK) return s.fail_early(st);

  if (*config) {
    if (!write_text(common.output, vtg_context_config_json(s.get()))) return 2;
    return 0;
  }
  if (*convert) {
    return s.finish(vtg_convert(s.get(), input.c_str(), common.output.c_str(), skip_invalid), common.report);
  }
  if (*teacher) return s.finish(vtg_teacher(s.get(), input.c_str(), common.output.c_str()), common.report);
  if (*losscheck) {
    const std::string report = !common.report.empty() ? common.report : common.output;
    return s.finish(vtg_losscheck(s.get()), report);
  }
  if (*fit) return s.finish(vtg_fit(s.get(), input.c_str(), common.output.c_str()), common.report);
  if (*decode) {
    const char* feat = features.empty() ? nullptr : features.c_str();
    return s.finish(vtg_decode(s.get(), input.c_str(), task.c_str(), feat, common.output.c_str()), common.report);
  }
  if (*eval) {
    const std::string report = !common.report.empty() ? common.report : common.output;
    return s.finish(vtg_eval(s.get(), input.c_str(), second.c_str(), task.c_str()), report);
  }
  return 1;
}
