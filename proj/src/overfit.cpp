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

#include "vtg/overfit.hpp"

#include <algorithm>
#include <cmath>

#include "vtg/random.hpp"

namespace vtg {

namespace {

struct Params {
  std::vector<PredictionSet> preds;
  EmbeddingBatch emb;
};

struct Problem {
  std::vector<UnifiedLabel> labels;
  std::vector<ClipTimeline> timelines;
  std::vector<std::size_t> positives;
  LossWeights weights;
  Aggregation aggregation;
};

LossReport evaluate(const Params& p, const Problem& prob) {
  return total_loss(p.preds, p.emb, prob.labels, prob.timelines, prob.weights, prob.positives,
                    prob.aggregation);
}

Params step(const Params& p, const LossReport& r, double lr) {
  Params next = p;
  const auto& gl = r.gradients.at("f_logits");
  const auto& go = r.gradients.at("offsets");
  const auto& gc = r.gradients.at("clip_embeddings");
  std::size_t at = 0;
  std::size_t emb_at = 0;
  for (std::size_t b = 0; b < next.preds.size(); ++b) {
    PredictionSet& ps = next.preds[b];
    for (std::size_t i = 0; i < ps.size(); ++i, ++at) {
      ps.f_logits[i] -= lr * gl[at];
      ps.offsets[i].start = std::max(0.0, ps.offsets[i].start - lr * go[2 * at]);
      ps.offsets[i].end = std::max(0.0, ps.offsets[i].end - lr * go[2 * at + 1]);
    }
    for (double& v : next.emb.clips[b].data) v -= lr * gc[emb_at++];
  }
  return next;
}

void fill_saliency(Params& p) {
  const auto cos = saliency_cosines(p.emb);
  for (std::size_t b = 0; b < p.preds.size(); ++b) p.preds[b].saliency = cos[b];
}

}  // namespace

OverfitResult overfit(const std::vector<GroundTruthRecord>& records, const LossWeights& w,
                      const OverfitOptions& options) {
  validate(w);
  require(!records.empty(), "overfit needs at least one record");
  require(options.embed_dim >= 1, "embedding dimension must be at least 1");
  require(options.learning_rate > 0.0 && std::isfinite(options.learning_rate), "learning rate must be positive");

  Problem prob;
  prob.weights = w;
  prob.aggregation = options.aggregation;
  for (const auto& rec : records) {
    validate(rec.label, rec.timeline);
    require(!eligible_positives(rec.label).empty(),
            "record " + rec.video_id + "/" + rec.query_id + " has no foreground clip");
    prob.labels.push_back(rec.label);
    prob.timelines.push_back(rec.timeline);
  }
  prob.positives = sample_positives(prob.labels, derive_seed(options.seed, 0));

  Rng rng(derive_seed(options.seed, 1));
  Params params;
  params.emb.sentences = Matrix(records.size(), options.embed_dim);
  for (double& v : params.emb.sentences.data) v = rng.normal();
  for (const auto& rec : records) {
    const std::size_t n = rec.timeline.num_clips();
    PredictionSet ps;
    ps.f_logits.assign(n, 0.0);
    ps.offsets.assign(n, Offsets{rec.timeline.clip_len(), rec.timeline.clip_len()});
    ps.saliency.assign(n, 0.0);
    params.preds.push_back(std::move(ps));
    Matrix m(n, options.embed_dim);
    for (double& v : m.data) v = rng.normal();
    params.emb.clips.push_back(std::move(m));
  }

  OverfitResult out;
  out.positives = prob.positives;
  LossReport current = evaluate(params, prob);
  if (!std::isfinite(current.value)) fail(ErrorKind::Validation, "overfit: non-finite initial loss");
  out.trajectory.push_back(current.value);

  double lr = options.learning_rate;
  for (std::size_t it = 0; it < options.steps; ++it) {
    bool accepted = false;
    while (lr >= options.min_learning_rate) {
      Params trial = step(params, current, lr);
      LossReport r = evaluate(trial, prob);
      if (std::isfinite(r.value) && r.value <= current.value) {
        params = std::move(trial);
        current = std::move(r);
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    ++out.accepted_steps;
    out.trajectory.push_back(current.value);
    lr = std::min(2.0 * lr, options.learning_rate);
  }

  fill_saliency(params);
  out.predictions = std::move(params.preds);
  return out;
}

}  // namespace vtg
