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

// Pseudo labels from precomputed clip-by-concept similarity matrices.

#pragma once

#include <string>
#include <vector>

#include "vtg/core_types.hpp"
#include "vtg/label_unify.hpp"

namespace vtg {

inline constexpr std::size_t kDefaultTopConcepts = 5;

/// Clip-by-concept cosine similarities; rows are clips.
struct SimilarityMatrix {
  Matrix values;
  std::vector<std::string> concept_names;
};

void validate(const SimilarityMatrix& sim);

/// Concept indices ranked by column mean (descending), ties by ascending index.
std::vector<std::size_t> top_concepts(const SimilarityMatrix& sim, std::size_t k = kDefaultTopConcepts);

/// Min-max normalisation of one concept column into [0, 1]; a constant column maps to all ones.
CurveAnnotation normalized_curve(const SimilarityMatrix& sim, std::size_t concept_index);

struct PseudoLabel {
  std::size_t concept_index = 0;
  Query query;
  UnifiedLabel label;
  CurveAnnotation curve;
};

/// One curve-derived label per selected concept, in concept-rank order.
std::vector<PseudoLabel> pseudo_labels(const ClipTimeline& timeline, const SimilarityMatrix& sim,
                                       std::size_t k = kDefaultTopConcepts, double bin = kDefaultCurveBin,
                                       Warnings* warnings = nullptr);

}  // namespace vtg
