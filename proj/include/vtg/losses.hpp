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

// Training objectives for the foreground, boundary, and saliency heads.
//
// Every kernel returns its value together with analytic gradients. Losses
// consume raw logits and raw embeddings; the sigmoid and the cosine
// normalisation are applied internally so the log terms can be evaluated in
// a numerically stable form.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vtg/core_types.hpp"

namespace vtg {

struct LossWeights {
  double lambda_f = 1.0;
  double lambda_l1 = 1.0;
  double lambda_iou = 1.0;
  double lambda_inter = 1.0;
  double lambda_intra = 1.0;
  double tau = 0.07;
  double neg_weight = 0.1;
  double beta = 1.0;  // smooth-L1 transition point
};

void validate(const LossWeights& w);

struct LossReport {
  double value = 0.0;
  std::map<std::string, std::vector<double>> gradients;
  std::map<std::string, double> components;
  Warnings warnings;
};

/// Weighted binary cross-entropy on logits, averaged over clips.
/// Gradient key: "f_logits".
LossReport foreground_loss(std::span<const double> logits, std::span<const std::uint8_t> foreground,
                           const LossWeights& w);

struct ScalarGrad {
  double value = 0.0;
  double derivative = 0.0;
};

ScalarGrad smooth_l1(double x, double beta = 1.0);

struct GIoU {
  double value = 0.0;
  /// d value / d (a.start, a.end, b.start, b.end).
  std::array<double, 4> grad{};
};

/// Generalised IoU of two 1-D intervals. At min/max ties the right-hand
/// derivative is used. A zero-length hull is defined to score 1.
GIoU giou_1d(const Interval& a, const Interval& b);

/// Smooth-L1 on both offset residuals plus (1 - gIoU) of the implied
/// boundaries, over foreground clips only, averaged over those clips.
/// Gradient key: "offsets" (start/end interleaved per clip).
LossReport boundary_loss(std::span<const Offsets> predicted, const UnifiedLabel& label,
                         const ClipTimeline& timeline, const LossWeights& w);

/// Clip embeddings per video (L_b x D each) and one sentence embedding per video (B x D).
struct EmbeddingBatch {
  std::vector<Matrix> clips;
  Matrix sentences;

  std::size_t batch_size() const noexcept { return clips.size(); }
  std::size_t dim() const noexcept { return sentences.cols; }
};

void validate(const EmbeddingBatch& emb);

double cosine(std::span<const double> a, std::span<const double> b);

/// Adds upstream * d cos(a, b) / d a and / d b into grad_a and grad_b.
void accumulate_cosine_grad(std::span<const double> a, std::span<const double> b, double upstream,
                            std::span<double> grad_a, std::span<double> grad_b);

/// Cosine between every clip and its own video's sentence; one row per video.
std::vector<std::vector<double>> saliency_cosines(const EmbeddingBatch& emb);

/// Clips eligible as contrastive positives: foreground with positive saliency.
std::vector<std::size_t> eligible_positives(const UnifiedLabel& label);

/// Uniform seeded draw from eligible_positives.
std::size_t sample_positive(const UnifiedLabel& label, std::uint64_t seed);

/// One positive per video, seeded per position in the batch.
std::vector<std::size_t> sample_positives(std::span<const UnifiedLabel> labels, std::uint64_t seed);

/// Intra-video InfoNCE against every clip whose saliency is strictly lower
/// than the positive's. Gradient key: "cosines".
LossReport saliency_intra_loss_at(std::span<const double> cosines, const UnifiedLabel& label,
                                  std::size_t positive, const LossWeights& w);

LossReport saliency_intra_loss(std::span<const double> cosines, const UnifiedLabel& label,
                               std::uint64_t seed, const LossWeights& w);

/// Inter-video InfoNCE from precomputed cross cosines: row b holds
/// cos(positive clip of video b, sentence k) for every k, so the diagonal is
/// the matching pair. Gradient key: "cross_cosines".
LossReport saliency_inter_loss(const Matrix& cross_cosines, const LossWeights& w);

/// Same loss evaluated from embeddings. Gradient keys: "clip_embeddings"
/// (videos concatenated, row-major) and "sentence_embeddings".
LossReport saliency_inter_loss(const EmbeddingBatch& emb, std::span<const std::size_t> positives,
                               const LossWeights& w);

enum class Aggregation {
  PerVideo,  // mean of per-video losses
  PerClip,   // per-video losses weighted by clip count
};

const char* to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& s);

/// Combined objective over a training set. Prediction saliency is ignored:
/// saliency comes from the embeddings. Gradient keys: "f_logits",
/// "offsets", "clip_embeddings", "sentence_embeddings" (videos concatenated).
/// Component values are reported unweighted by lambda_inter / lambda_intra.
LossReport total_loss(std::span<const PredictionSet> preds, const EmbeddingBatch& emb,
                      std::span<const UnifiedLabel> labels, std::span<const ClipTimeline> timelines,
                      const LossWeights& w, std::span<const std::size_t> positives,
                      Aggregation aggregation = Aggregation::PerVideo);

LossReport total_loss(std::span<const PredictionSet> preds, const EmbeddingBatch& emb,
                      std::span<const UnifiedLabel> labels, std::span<const ClipTimeline> timelines,
                      const LossWeights& w, std::uint64_t seed,
                      Aggregation aggregation = Aggregation::PerVideo);

}  // namespace vtg
