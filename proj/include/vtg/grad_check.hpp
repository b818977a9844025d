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

// Central finite-difference checking of the analytic loss gradients.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vtg/losses.hpp"

namespace vtg {

inline constexpr double kGradCheckEpsilon = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-5;

/// A named slice of the flat parameter vector ("f_logits", "offsets", ...).
struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
};

/// A scalar function of a flat parameter vector with its analytic gradient.
struct Checkable {
  std::string name;
  std::vector<double> point;
  std::vector<ParamBlock> blocks;
  /// Returns the value and writes the analytic gradient into `grad`.
  std::function<double(std::span<const double> x, std::span<double> grad)> eval;
  /// True when a non-differentiable point lies within `radius` of x.
  std::function<bool(std::span<const double> x, double radius)> near_kink;
};

struct GradCheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;  // evaluation point too close to a kink
  double max_rel_error = 0.0;
  std::map<std::string, double> block_max_rel_error;
};

/// |analytic - numeric| / max(|analytic|, |numeric|, 1). The unit floor
/// turns the measure absolute for gradients far below one, where the finite
/// difference itself carries ~eps^2 truncation error.
double gradient_relative_error(double analytic, double numeric);

GradCheckResult grad_check(const Checkable& c, double epsilon = kGradCheckEpsilon,
                           double tolerance = kGradCheckTolerance);

/// Losses the harness knows how to sample random evaluation points for.
enum class CheckedLoss {
  Foreground,
  SmoothL1,
  GIoU,
  BoundaryL1,
  BoundaryIoU,
  SaliencyIntra,
  SaliencyInter,
  Total,
};

std::vector<CheckedLoss> all_checked_losses();
const char* to_string(CheckedLoss loss);

/// Builds a checkable at a random point drawn from `seed`. Points are drawn
/// without regard to kinks; grad_check reports those as skipped.
Checkable random_checkable(CheckedLoss loss, std::uint64_t seed, const LossWeights& w);

/// Checkables at fixed points, for tests that need a specific location.
Checkable smooth_l1_checkable(double x, double beta);
Checkable giou_checkable(const Interval& a, const Interval& b);

struct LossCheckSummary {
  std::string name;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  double max_rel_error = 0.0;
  bool passed() const { return checked > 0 && failed == 0; }
};

/// Draws points from a seeded stream until `points` non-kink evaluations have
/// been checked (bounded by 20x attempts).
LossCheckSummary check_loss(CheckedLoss loss, std::size_t points, std::uint64_t seed, const LossWeights& w,
                            double epsilon = kGradCheckEpsilon, double tolerance = kGradCheckTolerance);

}  // namespace vtg
