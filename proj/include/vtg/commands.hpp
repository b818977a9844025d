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

// Pipeline commands: convert, teacher, losscheck, fit, decode, eval.
//
// Every command reads and writes JSON Lines files, returns an exit status and
// a JSON report, and is deterministic for a fixed config. Record-level
// problems are collected in the report; only unreadable inputs abort early.

#pragma once

#include <string>

#include <json.hpp>

#include "vtg/config.hpp"

namespace vtg {

enum class ExitStatus : int { Ok = 0, Validation = 1, Io = 2 };

struct CommandResult {
  ExitStatus status = ExitStatus::Ok;
  nlohmann::json report;
};

enum class DecodeTask { Moments, Highlights, Summary };

const char* to_string(DecodeTask t);
DecodeTask decode_task_from_string(const std::string& s);

/// Worker threads for record-parallel commands: VTG_NUM_THREADS if set,
/// otherwise the hardware concurrency. Output order never depends on it.
std::size_t worker_threads();

/// Labels every record. With `skip_invalid` a bad record is dropped from the
/// output and listed in the report without failing the command.
CommandResult cmd_convert(const RunConfig& cfg, const std::string& input, const std::string& output,
                          bool skip_invalid = false);

/// Writes `teacher.top_k` curve records per video of a similarity file.
CommandResult cmd_teacher(const RunConfig& cfg, const std::string& similarity, const std::string& output);

/// Finite-difference check of every loss at `losscheck.points` seeded points.
CommandResult cmd_losscheck(const RunConfig& cfg);

/// Overfits free per-clip parameters to a dataset and writes predictions.
CommandResult cmd_fit(const RunConfig& cfg, const std::string& dataset, const std::string& output);

/// `segments` is a file of per-video features or Gram matrices, required
/// for the summary task.
CommandResult cmd_decode(const RunConfig& cfg, const std::string& predictions, DecodeTask task,
                         const std::string& output, const std::string& segments = "");

CommandResult cmd_eval(const RunConfig& cfg, const std::string& decoded, const std::string& ground_truth,
                       DecodeTask task);

}  // namespace vtg
