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

#include "vtg/clip_teacher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace vtg {

void validate(const SimilarityMatrix& sim) {
  require(sim.values.rows >= 1 && sim.values.cols >= 1, "similarity matrix is empty");
  require(sim.values.data.size() == sim.values.rows * sim.values.cols, "similarity matrix storage mismatch");
  require(sim.concept_names.size() == sim.values.cols,
          "expected " + std::to_string(sim.values.cols) + " concept names, got " +
              std::to_string(sim.concept_names.size()));
  std::set<std::string> seen;
  for (const auto& name : sim.concept_names) {
    require(!name.empty(), "empty concept name");
    require(seen.insert(name).second, "duplicate concept name '" + name + "'");
  }
  for (double v : sim.values.data) {
    require(std::isfinite(v) && v >= -1.0 - 1e-6 && v <= 1.0 + 1e-6, "similarity value outside [-1, 1]");
  }
}

std::vector<std::size_t> top_concepts(const SimilarityMatrix& sim, std::size_t k) {
  validate(sim);
  const std::size_t c = sim.values.cols;
  require(k >= 1 && k <= c, "cannot select " + std::to_string(k) + " of " + std::to_string(c) + " concepts");

  std::vector<double> means(c, 0.0);
  for (std::size_t r = 0; r < sim.values.rows; ++r) {
    for (std::size_t j = 0; j < c; ++j) means[j] += sim.values(r, j);
  }
  for (double& m : means) m /= static_cast<double>(sim.values.rows);

  std::vector<std::size_t> idx(c);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
  idx.resize(k);
  return idx;
}

CurveAnnotation normalized_curve(const SimilarityMatrix& sim, std::size_t concept_index) {
  require(concept_index < sim.values.cols, "concept index out of range");
  const std::size_t n = sim.values.rows;
  double lo = sim.values(0, concept_index);
  double hi = lo;
  for (std::size_t r = 1; r < n; ++r) {
    lo = std::min(lo, sim.values(r, concept_index));
    hi = std::max(hi, sim.values(r, concept_index));
  }
  CurveAnnotation curve;
  curve.values.resize(n, 1.0);
  if (hi > lo) {
    for (std::size_t r = 0; r < n; ++r) curve.values[r] = (sim.values(r, concept_index) - lo) / (hi - lo);
  }
  return curve;
}

std::vector<PseudoLabel> pseudo_labels(const ClipTimeline& timeline, const SimilarityMatrix& sim,
                                       std::size_t k, double bin, Warnings* warnings) {
  validate(sim);
  require(sim.values.rows == timeline.num_clips(),
          "similarity matrix has " + std::to_string(sim.values.rows) + " rows but the video has " +
              std::to_string(timeline.num_clips()) + " clips");
  std::vector<PseudoLabel> out;
  for (std::size_t c : top_concepts(sim, k)) {
    PseudoLabel p;
    p.concept_index = c;
    p.query = Query{sim.concept_names[c], QueryKind::Concept};
    p.curve = normalized_curve(sim, c);
    p.label = from_curve(timeline, p.curve, bin, warnings);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace vtg
