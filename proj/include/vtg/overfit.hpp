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
#include <vector>

#include "vtg/core_types.hpp"
#include "vtg/losses.hpp"

namespace vtg {

struct OverfitOptions {
  std::size_t steps = 2000;
  double learning_rate = 1.0;
  std::uint64_t seed = 0;
  std::size_t embed_dim = 16;
  /// Backtracking gives up on a step once the trial rate falls below this.
  double min_learning_rate = 1e-10;
  Aggregation aggregation = Aggregation::PerVideo;
};

struct OverfitResult {
  std::vector<PredictionSet> predictions;
  /// Loss before the first step and after every accepted step.
  std::vector<double> trajectory;
  std::size_t accepted_steps = 0;
  bool converged = false;  // backtracking could not find a descent step
  std::vector<std::size_t> positives;
};

/// Gradient descent with step-halving backtracking on total_loss over free
/// per-clip parameters: foreground logits, offsets (projected onto >= 0), and
/// clip embeddings. Each record gets a fixed random sentence embedding, and
/// contrastive positives are drawn once per run so the objective is fixed.
OverfitResult overfit(const std::vector<GroundTruthRecord>& records, const LossWeights& w,
                      const OverfitOptions& options);

}  // namespace vtg
