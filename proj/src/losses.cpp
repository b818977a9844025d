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

#include "vtg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vtg/random.hpp"

namespace vtg {

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double acc = 0.0;
  for (double v : z) acc += std::exp(v - m);
  return m + std::log(acc);
}

// Cross-entropy of index `target` under softmax(z); writes dL/dz into grad.
double softmax_xent(std::span<const double> z, std::size_t target, std::span<double> grad) {
  const double lse = log_sum_exp(z);
  for (std::size_t j = 0; j < z.size(); ++j) grad[j] = std::exp(z[j] - lse);
  grad[target] -= 1.0;
  return lse - z[target];
}

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

void validate(const LossWeights& w) {
  for (double v : {w.lambda_f, w.lambda_l1, w.lambda_iou, w.lambda_inter, w.lambda_intra}) {
    require(std::isfinite(v) && v >= 0.0, "loss weights must be finite and non-negative");
  }
  require(std::isfinite(w.tau) && w.tau > 0.0, "temperature must be positive");
  require(w.neg_weight >= 0.0 && w.neg_weight <= 1.0, "negative weight must lie in [0, 1]");
  require(std::isfinite(w.beta) && w.beta > 0.0, "smooth-L1 beta must be positive");
}

LossReport foreground_loss(std::span<const double> logits, std::span<const std::uint8_t> foreground,
                           const LossWeights& w) {
  require(logits.size() == foreground.size(), "foreground loss: " + std::to_string(logits.size()) +
                                                  " logits vs " + std::to_string(foreground.size()) +
                                                  " labels");
  require(!logits.empty(), "foreground loss needs at least one clip");
  const double scale = w.lambda_f / static_cast<double>(logits.size());
  LossReport r;
  auto& g = r.gradients["f_logits"];
  g.resize(logits.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double x = logits[i];
    const double p = sigmoid(x);
    if (foreground[i]) {
      acc += softplus(-x);  // -log sigmoid(x)
      g[i] = scale * (p - 1.0);
    } else {
      acc += w.neg_weight * softplus(x);  // -log(1 - sigmoid(x))
      g[i] = scale * w.neg_weight * p;
    }
  }
  r.value = scale * acc;
  return r;
}

ScalarGrad smooth_l1(double x, double beta) {
  require(beta > 0.0, "smooth-L1 beta must be positive");
  const double ax = std::abs(x);
  if (ax < beta) return {0.5 * x * x / beta, x / beta};
  return {ax - 0.5 * beta, x > 0.0 ? 1.0 : -1.0};
}

GIoU giou_1d(const Interval& a, const Interval& b) {
  const double m = std::min(a.end, b.end) - std::max(a.start, b.start);
  const double inter = std::max(0.0, m);
  const double uni = a.length() + b.length() - inter;
  const double hull = std::max(a.end, b.end) - std::min(a.start, b.start);
  GIoU out;
  if (hull <= 0.0) {
    out.value = 1.0;
    return out;
  }
  const double iou = uni > 0.0 ? inter / uni : 0.0;
  out.value = iou - (hull - uni) / hull;

  // Partials of value w.r.t. the intermediate quantities.
  double d_inter = -1.0 / hull;
  double d_len = 1.0 / hull;  // same for both lengths
  if (uni > 0.0) {
    d_inter += (uni + inter) / (uni * uni);
    d_len -= inter / (uni * uni);
  }
  const double d_hull = -uni / (hull * hull);

  // Right-hand derivatives of the min/max pieces, ordered (a.start, a.end, b.start, b.end).
  const std::array<double, 4> dm = {
      -(a.start >= b.start ? 1.0 : 0.0),
      (a.end < b.end ? 1.0 : 0.0),
      -(b.start >= a.start ? 1.0 : 0.0),
      (b.end < a.end ? 1.0 : 0.0),
  };
  const std::array<double, 4> dh = {
      -(a.start < b.start ? 1.0 : 0.0),
      (a.end >= b.end ? 1.0 : 0.0),
      -(b.start < a.start ? 1.0 : 0.0),
      (b.end >= a.end ? 1.0 : 0.0),
  };
  const std::array<double, 4> dlen = {-1.0, 1.0, -1.0, 1.0};
  for (std::size_t k = 0; k < 4; ++k) {
    double di = 0.0;
    if (m > 0.0) di = dm[k];
    else if (m == 0.0) di = std::max(0.0, dm[k]);
    out.grad[k] = d_inter * di + d_len * dlen[k] + d_hull * dh[k];
  }
  return out;
}

LossReport boundary_loss(std::span<const Offsets> predicted, const UnifiedLabel& label,
                         const ClipTimeline& timeline, const LossWeights& w) {
  const std::size_t n = timeline.num_clips();
  require(predicted.size() == n && label.size() == n,
          "boundary loss: prediction/label/timeline lengths disagree");
  LossReport r;
  auto& g = r.gradients["offsets"];
  g.assign(2 * n, 0.0);
  const std::size_t fg = label.foreground_count();
  if (fg == 0) {
    r.warnings.push_back("boundary loss: no foreground clips");
    return r;
  }
  const double scale = 1.0 / static_cast<double>(fg);
  double l1_total = 0.0;
  double iou_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!label.foreground[i]) continue;
    const double t = timeline.timestamp(i);
    const Offsets& p = predicted[i];
    const Offsets& d = label.offsets[i];
    const ScalarGrad ls = smooth_l1(p.start - d.start, w.beta);
    const ScalarGrad le = smooth_l1(p.end - d.end, w.beta);
    const GIoU gi = giou_1d({t - p.start, t + p.end}, {t - d.start, t + d.end});
    l1_total += ls.value + le.value;
    iou_total += 1.0 - gi.value;
    // pred start = t - d_start, pred end = t + d_end
    g[2 * i] = scale * (w.lambda_l1 * ls.derivative + w.lambda_iou * gi.grad[0]);
    g[2 * i + 1] = scale * (w.lambda_l1 * le.derivative - w.lambda_iou * gi.grad[1]);
  }
  r.components["smooth_l1"] = scale * l1_total;
  r.components["giou"] = scale * iou_total;
  r.value = scale * (w.lambda_l1 * l1_total + w.lambda_iou * iou_total);
  return r;
}

void validate(const EmbeddingBatch& emb) {
  require(emb.batch_size() >= 1, "embedding batch is empty");
  require(emb.sentences.rows == emb.batch_size(), "one sentence embedding per video is required");
  require(emb.dim() >= 1, "embedding dimension must be at least 1");
  for (std::size_t b = 0; b < emb.batch_size(); ++b) {
    const Matrix& c = emb.clips[b];
    require(c.cols == emb.dim(), "clip embedding dimension mismatch in video " + std::to_string(b));
    require(c.rows >= 1, "video " + std::to_string(b) + " has no clip embeddings");
    for (std::size_t i = 0; i < c.rows; ++i) {
      require(norm(c.row(i)) > 0.0, "zero-norm clip embedding (video " + std::to_string(b) + ", clip " +
                                        std::to_string(i) + ")");
    }
    require(norm(emb.sentences.row(b)) > 0.0, "zero-norm sentence embedding " + std::to_string(b));
  }
}

double cosine(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "cosine of vectors with different lengths");
  const double na = norm(a);
  const double nb = norm(b);
  require(na > 0.0 && nb > 0.0, "cosine of a zero-norm vector");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb);
}

void accumulate_cosine_grad(std::span<const double> a, std::span<const double> b, double upstream,
                            std::span<double> grad_a, std::span<double> grad_b) {
  const double na = norm(a);
  const double nb = norm(b);
  const double c = std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb);
  for (std::size_t k = 0; k < a.size(); ++k) {
    grad_a[k] += upstream * (b[k] / (na * nb) - c * a[k] / (na * na));
    grad_b[k] += upstream * (a[k] / (na * nb) - c * b[k] / (nb * nb));
  }
}

std::vector<std::vector<double>> saliency_cosines(const EmbeddingBatch& emb) {
  validate(emb);
  std::vector<std::vector<double>> out(emb.batch_size());
  for (std::size_t b = 0; b < emb.batch_size(); ++b) {
    const Matrix& c = emb.clips[b];
    out[b].resize(c.rows);
    for (std::size_t i = 0; i < c.rows; ++i) out[b][i] = cosine(c.row(i), emb.sentences.row(b));
  }
  return out;
}

std::vector<std::size_t> eligible_positives(const UnifiedLabel& label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label.foreground[i] && label.saliency[i] > 0.0) out.push_back(i);
  }
  return out;
}

std::size_t sample_positive(const UnifiedLabel& label, std::uint64_t seed) {
  const auto eligible = eligible_positives(label);
  require(!eligible.empty(), "no foreground clip with positive saliency to use as a positive");
  return eligible[splitmix64(seed) % eligible.size()];
}

std::vector<std::size_t> sample_positives(std::span<const UnifiedLabel> labels, std::uint64_t seed) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t b = 0; b < labels.size(); ++b) out.push_back(sample_positive(labels[b], derive_seed(seed, b)));
  return out;
}

LossReport saliency_intra_loss_at(std::span<const double> cosines, const UnifiedLabel& label,
                                  std::size_t positive, const LossWeights& w) {
  require(cosines.size() == label.size(), "intra loss: cosine/label length mismatch");
  require(positive < label.size() && label.foreground[positive] && label.saliency[positive] > 0.0,
          "intra loss: clip " + std::to_string(positive) + " is not an eligible positive");
  LossReport r;
  auto& g = r.gradients["cosines"];
  g.assign(cosines.size(), 0.0);

  std::vector<std::size_t> members{positive};
  for (std::size_t j = 0; j < label.size(); ++j) {
    if (label.saliency[j] < label.saliency[positive]) members.push_back(j);
  }
  if (members.size() == 1) {
    r.warnings.push_back("intra loss: no clip has lower saliency than the positive");
    return r;
  }
  std::vector<double> z(members.size());
  std::vector<double> dz(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) z[k] = cosines[members[k]] / w.tau;
  r.value = softmax_xent(z, 0, dz);
  for (std::size_t k = 0; k < members.size(); ++k) g[members[k]] += dz[k] / w.tau;
  return r;
}

LossReport saliency_intra_loss(std::span<const double> cosines, const UnifiedLabel& label,
                               std::uint64_t seed, const LossWeights& w) {
  return saliency_intra_loss_at(cosines, label, sample_positive(label, seed), w);
}

LossReport saliency_inter_loss(const Matrix& cross_cosines, const LossWeights& w) {
  const std::size_t batch = cross_cosines.rows;
  require(batch >= 1 && cross_cosines.cols == batch, "inter loss needs a square batch of cross cosines");
  LossReport r;
  auto& g = r.gradients["cross_cosines"];
  g.assign(batch * batch, 0.0);
  std::vector<double> z(batch);
  std::vector<double> dz(batch);
  const double scale = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t k = 0; k < batch; ++k) z[k] = cross_cosines(b, k) / w.tau;
    r.value += scale * softmax_xent(z, b, dz);
    for (std::size_t k = 0; k < batch; ++k) g[b * batch + k] = scale * dz[k] / w.tau;
  }
  return r;
}

namespace {

std::vector<std::size_t> clip_row_offsets(const EmbeddingBatch& emb) {
  std::vector<std::size_t> offs(emb.batch_size() + 1, 0);
  for (std::size_t b = 0; b < emb.batch_size(); ++b) offs[b + 1] = offs[b] + emb.clips[b].rows;
  return offs;
}

Matrix cross_cosine_matrix(const EmbeddingBatch& emb, std::span<const std::size_t> positives) {
  const std::size_t batch = emb.batch_size();
  Matrix cross(batch, batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t k = 0; k < batch; ++k) {
      cross(b, k) = cosine(emb.clips[b].row(positives[b]), emb.sentences.row(k));
    }
  }
  return cross;
}

void check_positives(const EmbeddingBatch& emb, std::span<const std::size_t> positives) {
  require(positives.size() == emb.batch_size(), "one positive index per video is required");
  for (std::size_t b = 0; b < positives.size(); ++b) {
    require(positives[b] < emb.clips[b].rows,
            "positive index " + std::to_string(positives[b]) + " out of range in video " + std::to_string(b));
  }
}

// Pushes d loss / d cross(b, k) back onto the embeddings.
void backprop_cross(const EmbeddingBatch& emb, std::span<const std::size_t> positives, const Matrix& d_cross,
                    std::span<const std::size_t> row_offsets, std::vector<double>& g_clips,
                    std::vector<double>& g_sent) {
  const std::size_t d = emb.dim();
  for (std::size_t b = 0; b < emb.batch_size(); ++b) {
    const std::size_t p = positives[b];
    std::span<double> ga(g_clips.data() + (row_offsets[b] + p) * d, d);
    for (std::size_t k = 0; k < emb.batch_size(); ++k) {
      std::span<double> gs(g_sent.data() + k * d, d);
      accumulate_cosine_grad(emb.clips[b].row(p), emb.sentences.row(k), d_cross(b, k), ga, gs);
    }
  }
}

}  // namespace

LossReport saliency_inter_loss(const EmbeddingBatch& emb, std::span<const std::size_t> positives,
                               const LossWeights& w) {
  validate(emb);
  check_positives(emb, positives);
  const Matrix cross = cross_cosine_matrix(emb, positives);
  LossReport inner = saliency_inter_loss(cross, w);

  const auto offs = clip_row_offsets(emb);
  LossReport r;
  r.value = inner.value;
  auto& gc = r.gradients["clip_embeddings"];
  auto& gs = r.gradients["sentence_embeddings"];
  gc.assign(offs.back() * emb.dim(), 0.0);
  gs.assign(emb.batch_size() * emb.dim(), 0.0);
  Matrix d_cross(cross.rows, cross.cols);
  d_cross.data = inner.gradients["cross_cosines"];
  backprop_cross(emb, positives, d_cross, offs, gc, gs);
  return r;
}

const char* to_string(Aggregation a) { return a == Aggregation::PerClip ? "per_clip" : "per_video"; }

Aggregation aggregation_from_string(const std::string& s) {
  if (s == "per_video") return Aggregation::PerVideo;
  if (s == "per_clip") return Aggregation::PerClip;
  fail(ErrorKind::Validation, "unknown aggregation '" + s + "'");
}

LossReport total_loss(std::span<const PredictionSet> preds, const EmbeddingBatch& emb,
                      std::span<const UnifiedLabel> labels, std::span<const ClipTimeline> timelines,
                      const LossWeights& w, std::span<const std::size_t> positives, Aggregation aggregation) {
  validate(w);
  validate(emb);
  const std::size_t batch = emb.batch_size();
  require(preds.size() == batch && labels.size() == batch && timelines.size() == batch,
          "total loss: predictions, labels, timelines, and embeddings disagree on batch size");
  check_positives(emb, positives);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t n = timelines[b].num_clips();
    require(preds[b].size() == n && preds[b].offsets.size() == n && labels[b].size() == n &&
                emb.clips[b].rows == n,
            "total loss: shape mismatch in video " + std::to_string(b));
  }

  const auto offs = clip_row_offsets(emb);
  const std::size_t total_clips = offs.back();
  std::vector<double> weight(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    weight[b] = aggregation == Aggregation::PerClip
                    ? static_cast<double>(timelines[b].num_clips()) / static_cast<double>(total_clips)
                    : 1.0 / static_cast<double>(batch);
  }

  const std::size_t d = emb.dim();
  LossReport r;
  auto& g_logits = r.gradients["f_logits"];
  auto& g_offsets = r.gradients["offsets"];
  auto& g_clips = r.gradients["clip_embeddings"];
  auto& g_sent = r.gradients["sentence_embeddings"];
  g_logits.assign(total_clips, 0.0);
  g_offsets.assign(2 * total_clips, 0.0);
  g_clips.assign(total_clips * d, 0.0);
  g_sent.assign(batch * d, 0.0);
  double comp_f = 0.0, comp_b = 0.0, comp_intra = 0.0, comp_inter = 0.0;

  for (std::size_t b = 0; b < batch; ++b) {
    const double wb = weight[b];
    const LossReport lf = foreground_loss(preds[b].f_logits, labels[b].foreground, w);
    const LossReport lb = boundary_loss(preds[b].offsets, labels[b], timelines[b], w);
    const auto& gf = lf.gradients.at("f_logits");
    const auto& gb = lb.gradients.at("offsets");
    for (std::size_t i = 0; i < gf.size(); ++i) g_logits[offs[b] + i] += wb * gf[i];
    for (std::size_t i = 0; i < gb.size(); ++i) g_offsets[2 * offs[b] + i] += wb * gb[i];
    comp_f += wb * lf.value;
    comp_b += wb * lb.value;
    for (const auto& m : lb.warnings) r.warnings.push_back("video " + std::to_string(b) + ": " + m);

    std::vector<double> cos(timelines[b].num_clips());
    for (std::size_t i = 0; i < cos.size(); ++i) cos[i] = cosine(emb.clips[b].row(i), emb.sentences.row(b));
    const LossReport li = saliency_intra_loss_at(cos, labels[b], positives[b], w);
    comp_intra += wb * li.value;
    for (const auto& m : li.warnings) r.warnings.push_back("video " + std::to_string(b) + ": " + m);
    const auto& gi = li.gradients.at("cosines");
    for (std::size_t i = 0; i < cos.size(); ++i) {
      if (gi[i] == 0.0) continue;
      std::span<double> ga(g_clips.data() + (offs[b] + i) * d, d);
      std::span<double> gs(g_sent.data() + b * d, d);
      accumulate_cosine_grad(emb.clips[b].row(i), emb.sentences.row(b), wb * w.lambda_intra * gi[i], ga, gs);
    }
  }

  // Inter-video term, one softmax row per video.
  const Matrix cross = cross_cosine_matrix(emb, positives);
  Matrix d_cross(batch, batch);
  std::vector<double> z(batch);
  std::vector<double> dz(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t k = 0; k < batch; ++k) z[k] = cross(b, k) / w.tau;
    comp_inter += weight[b] * softmax_xent(z, b, dz);
    for (std::size_t k = 0; k < batch; ++k) d_cross(b, k) = weight[b] * w.lambda_inter * dz[k] / w.tau;
  }
  backprop_cross(emb, positives, d_cross, offs, g_clips, g_sent);

  r.components["foreground"] = comp_f;
  r.components["boundary"] = comp_b;
  r.components["intra"] = comp_intra;
  r.components["inter"] = comp_inter;
  r.value = comp_f + comp_b + w.lambda_intra * comp_intra + w.lambda_inter * comp_inter;
  return r;
}

LossReport total_loss(std::span<const PredictionSet> preds, const EmbeddingBatch& emb,
                      std::span<const UnifiedLabel> labels, std::span<const ClipTimeline> timelines,
                      const LossWeights& w, std::uint64_t seed, Aggregation aggregation) {
  const auto positives = sample_positives(labels, seed);
  return total_loss(preds, emb, labels, timelines, w, positives, aggregation);
}

}  // namespace vtg
