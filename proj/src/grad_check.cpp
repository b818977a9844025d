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

#include "vtg/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "vtg/label_unify.hpp"
#include "vtg/random.hpp"

namespace vtg {

double gradient_relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1.0});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(const Checkable& c, double epsilon, double tolerance) {
  GradCheckResult res;
  res.name = c.name;
  std::vector<double> x = c.point;
  if (c.near_kink && c.near_kink(x, 2.0 * epsilon)) {
    res.skipped = true;
    res.passed = true;
    return res;
  }
  std::vector<double> analytic(x.size(), 0.0);
  std::vector<double> scratch(x.size(), 0.0);
  c.eval(x, analytic);

  std::vector<double> rel(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + epsilon;
    const double fp = c.eval(x, scratch);
    x[k] = saved - epsilon;
    const double fm = c.eval(x, scratch);
    x[k] = saved;
    const double numeric = (fp - fm) / (2.0 * epsilon);
    rel[k] = std::isfinite(numeric) && std::isfinite(analytic[k])
                 ? gradient_relative_error(analytic[k], numeric)
                 : std::numeric_limits<double>::infinity();
    res.max_rel_error = std::max(res.max_rel_error, rel[k]);
  }
  for (const ParamBlock& b : c.blocks) {
    double m = 0.0;
    for (std::size_t k = b.offset; k < b.offset + b.size; ++k) m = std::max(m, rel[k]);
    res.block_max_rel_error[b.name] = m;
  }
  res.passed = res.max_rel_error < tolerance;
  return res;
}

std::vector<CheckedLoss> all_checked_losses() {
  return {CheckedLoss::Foreground,    CheckedLoss::SmoothL1,      CheckedLoss::GIoU,
          CheckedLoss::BoundaryL1,    CheckedLoss::BoundaryIoU,   CheckedLoss::SaliencyIntra,
          CheckedLoss::SaliencyInter, CheckedLoss::Total};
}

const char* to_string(CheckedLoss loss) {
  switch (loss) {
    case CheckedLoss::Foreground: return "foreground_loss";
    case CheckedLoss::SmoothL1: return "smooth_l1";
    case CheckedLoss::GIoU: return "giou_1d";
    case CheckedLoss::BoundaryL1: return "boundary_loss.smooth_l1";
    case CheckedLoss::BoundaryIoU: return "boundary_loss.giou";
    case CheckedLoss::SaliencyIntra: return "saliency_intra_loss";
    case CheckedLoss::SaliencyInter: return "saliency_inter_loss";
    case CheckedLoss::Total: return "total_loss";
  }
  return "unknown";
}

namespace {

bool close(double a, double b, double r) { return std::abs(a - b) <= r; }

bool giou_near_kink(const Interval& a, const Interval& b, double r) {
  // Perturbing one endpoint by r moves these differences by at most r.
  return close(a.start, b.start, r) || close(a.end, b.end, r) ||
         close(std::min(a.end, b.end), std::max(a.start, b.start), r);
}

std::vector<Offsets> unpack_offsets(std::span<const double> x) {
  std::vector<Offsets> out(x.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {x[2 * i], x[2 * i + 1]};
  return out;
}

bool boundary_near_kink(std::span<const double> flat, const UnifiedLabel& label, const ClipTimeline& tl,
                        const LossWeights& w, double r) {
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (!label.foreground[i]) continue;
    const double ps = flat[2 * i], pe = flat[2 * i + 1];
    const Offsets& d = label.offsets[i];
    if (w.lambda_l1 > 0.0 &&
        (close(std::abs(ps - d.start), w.beta, r) || close(std::abs(pe - d.end), w.beta, r))) {
      return true;
    }
    const double t = tl.timestamp(i);
    if (w.lambda_iou > 0.0 && giou_near_kink({t - ps, t + pe}, {t - d.start, t + d.end}, r)) return true;
  }
  return false;
}

// Random interval label on a short timeline with at least one foreground clip.
UnifiedLabel random_interval_label(const ClipTimeline& tl, Rng& rng) {
  const std::size_t n = tl.num_clips();
  const std::size_t a = rng.index(n);
  const std::size_t len = 1 + rng.index(n - a);
  // Endpoints off the clip grid so offsets are generic.
  const double s = std::max(0.0, tl.clip_start(a) + rng.uniform(0.0, 0.45) * tl.clip_len());
  const double e = std::min(tl.duration(), tl.clip_end(a + len - 1) - rng.uniform(0.0, 0.45) * tl.clip_len());
  return from_intervals(tl, {Interval{s, e}});
}

}  // namespace

Checkable smooth_l1_checkable(double x, double beta) {
  Checkable c;
  c.name = "smooth_l1";
  c.point = {x};
  c.blocks = {{"x", 0, 1}};
  c.eval = [beta](std::span<const double> p, std::span<double> g) {
    const ScalarGrad s = smooth_l1(p[0], beta);
    g[0] = s.derivative;
    return s.value;
  };
  c.near_kink = [beta](std::span<const double> p, double r) { return close(std::abs(p[0]), beta, r); };
  return c;
}

Checkable giou_checkable(const Interval& a, const Interval& b) {
  Checkable c;
  c.name = "giou_1d";
  c.point = {a.start, a.end, b.start, b.end};
  c.blocks = {{"a", 0, 2}, {"b", 2, 2}};
  c.eval = [](std::span<const double> p, std::span<double> g) {
    const GIoU r = giou_1d({p[0], p[1]}, {p[2], p[3]});
    std::copy(r.grad.begin(), r.grad.end(), g.begin());
    return r.value;
  };
  c.near_kink = [](std::span<const double> p, double r) {
    return giou_near_kink({p[0], p[1]}, {p[2], p[3]}, r);
  };
  return c;
}

Checkable random_checkable(CheckedLoss loss, std::uint64_t seed, const LossWeights& w) {
  Rng rng(seed);
  Checkable c;
  c.name = to_string(loss);
  switch (loss) {
    case CheckedLoss::Foreground: {
      const std::size_t n = 4 + rng.index(9);
      auto fg = std::make_shared<std::vector<std::uint8_t>>(n);
      c.point.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        (*fg)[i] = static_cast<std::uint8_t>(rng.index(2));
        c.point[i] = 3.0 * rng.normal();
      }
      c.blocks = {{"f_logits", 0, n}};
      c.eval = [fg, w](std::span<const double> x, std::span<double> g) {
        const LossReport r = foreground_loss(x, *fg, w);
        const auto& gr = r.gradients.at("f_logits");
        std::copy(gr.begin(), gr.end(), g.begin());
        return r.value;
      };
      return c;
    }
    case CheckedLoss::SmoothL1: {
      Checkable s = smooth_l1_checkable(rng.uniform(-3.0, 3.0), w.beta);
      return s;
    }
    case CheckedLoss::GIoU: {
      const double as = rng.uniform(0.0, 10.0), bs = rng.uniform(0.0, 10.0);
      return giou_checkable({as, as + rng.uniform(0.5, 5.0)}, {bs, bs + rng.uniform(0.5, 5.0)});
    }
    case CheckedLoss::BoundaryL1:
    case CheckedLoss::BoundaryIoU: {
      LossWeights lw = w;
      if (loss == CheckedLoss::BoundaryL1) lw.lambda_iou = 0.0;
      else lw.lambda_l1 = 0.0;
      if (loss == CheckedLoss::BoundaryL1 && lw.lambda_l1 == 0.0) lw.lambda_l1 = 1.0;
      if (loss == CheckedLoss::BoundaryIoU && lw.lambda_iou == 0.0) lw.lambda_iou = 1.0;
      const ClipTimeline tl(4 + rng.index(9), rng.uniform(0.5, 2.0));
      auto label = std::make_shared<UnifiedLabel>(random_interval_label(tl, rng));
      c.point.resize(2 * tl.num_clips());
      for (std::size_t i = 0; i < tl.num_clips(); ++i) {
        const Offsets& d = label->offsets[i];
        if (loss == CheckedLoss::BoundaryL1) {
          c.point[2 * i] = d.start + 2.0 * rng.normal();
          c.point[2 * i + 1] = d.end + 2.0 * rng.normal();
        } else {
          // Keep predicted intervals well-formed for the IoU term.
          c.point[2 * i] = rng.uniform(0.05, 1.5) * (d.start + tl.clip_len());
          c.point[2 * i + 1] = rng.uniform(0.05, 1.5) * (d.end + tl.clip_len());
        }
      }
      c.blocks = {{"offsets", 0, c.point.size()}};
      c.eval = [label, tl, lw](std::span<const double> x, std::span<double> g) {
        const LossReport r = boundary_loss(unpack_offsets(x), *label, tl, lw);
        const auto& gr = r.gradients.at("offsets");
        std::copy(gr.begin(), gr.end(), g.begin());
        return r.value;
      };
      c.near_kink = [label, tl, lw](std::span<const double> x, double r) {
        return boundary_near_kink(x, *label, tl, lw, r);
      };
      return c;
    }
    case CheckedLoss::SaliencyIntra: {
      const std::size_t n = 3 + rng.index(10);
      auto label = std::make_shared<UnifiedLabel>(UnifiedLabel::background(n));
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.index(2)) {
          label->foreground[i] = 1;
          label->saliency[i] = std::round(rng.uniform(0.05, 1.0) * 20.0) / 20.0;
        }
      }
      if (label->foreground_count() == 0) {
        label->foreground[0] = 1;
        label->saliency[0] = 1.0;
      }
      const std::size_t p = sample_positive(*label, rng.next());
      c.point.resize(n);
      for (double& v : c.point) v = rng.uniform(-1.0, 1.0);
      c.blocks = {{"cosines", 0, n}};
      c.eval = [label, p, w](std::span<const double> x, std::span<double> g) {
        const LossReport r = saliency_intra_loss_at(x, *label, p, w);
        const auto& gr = r.gradients.at("cosines");
        std::copy(gr.begin(), gr.end(), g.begin());
        return r.value;
      };
      return c;
    }
    case CheckedLoss::SaliencyInter:
    case CheckedLoss::Total: {
      const std::size_t batch = 1 + rng.index(4);
      const std::size_t dim = 2 + rng.index(5);
      std::vector<ClipTimeline> tls;
      std::vector<UnifiedLabel> labels;
      std::vector<std::size_t> sizes;
      for (std::size_t b = 0; b < batch; ++b) {
        tls.emplace_back(3 + rng.index(5), rng.uniform(0.5, 2.0));
        labels.push_back(random_interval_label(tls.back(), rng));
        sizes.push_back(tls.back().num_clips());
      }
      std::vector<std::size_t> positives = sample_positives(labels, rng.next());
      std::size_t total_clips = 0;
      for (auto s : sizes) total_clips += s;

      // Layout: [logits | offsets | clip embeddings | sentence embeddings]; the
      // inter check uses only the embedding part.
      const bool with_heads = loss == CheckedLoss::Total;
      const std::size_t head = with_heads ? 3 * total_clips : 0;
      c.point.resize(head + total_clips * dim + batch * dim);
      if (with_heads) {
        std::size_t at = 0;
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t i = 0; i < sizes[b]; ++i) c.point[at++] = 2.0 * rng.normal();
        }
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t i = 0; i < sizes[b]; ++i) {
            const Offsets& d = labels[b].offsets[i];
            c.point[at++] = rng.uniform(0.05, 1.5) * (d.start + tls[b].clip_len());
            c.point[at++] = rng.uniform(0.05, 1.5) * (d.end + tls[b].clip_len());
          }
        }
        c.blocks = {{"f_logits", 0, total_clips}, {"offsets", total_clips, 2 * total_clips}};
      }
      for (std::size_t k = head; k < c.point.size(); ++k) c.point[k] = rng.normal();
      c.blocks.push_back({"clip_embeddings", head, total_clips * dim});
      c.blocks.push_back({"sentence_embeddings", head + total_clips * dim, batch * dim});

      struct Problem {
        std::vector<ClipTimeline> tls;
        std::vector<UnifiedLabel> labels;
        std::vector<std::size_t> sizes, positives;
        std::size_t total_clips, dim, head;
        bool with_heads;
      };
      auto prob = std::make_shared<Problem>(
          Problem{tls, labels, sizes, positives, total_clips, dim, head, with_heads});
      auto build_emb = [prob](std::span<const double> x) {
        EmbeddingBatch emb;
        std::size_t at = prob->head;
        for (std::size_t s : prob->sizes) {
          Matrix m(s, prob->dim);
          std::copy(x.begin() + at, x.begin() + at + s * prob->dim, m.data.begin());
          at += s * prob->dim;
          emb.clips.push_back(std::move(m));
        }
        emb.sentences = Matrix(prob->sizes.size(), prob->dim);
        std::copy(x.begin() + at, x.end(), emb.sentences.data.begin());
        return emb;
      };
      c.eval = [prob, build_emb, w](std::span<const double> x, std::span<double> g) {
        const EmbeddingBatch emb = build_emb(x);
        LossReport r;
        if (prob->with_heads) {
          std::vector<PredictionSet> preds(prob->sizes.size());
          std::size_t lo = 0;
          std::size_t oo = prob->total_clips;
          for (std::size_t b = 0; b < preds.size(); ++b) {
            const std::size_t s = prob->sizes[b];
            preds[b].f_logits.assign(x.begin() + lo, x.begin() + lo + s);
            preds[b].offsets = unpack_offsets(x.subspan(oo, 2 * s));
            preds[b].saliency.assign(s, 0.0);
            lo += s;
            oo += 2 * s;
          }
          r = total_loss(preds, emb, prob->labels, prob->tls, w, prob->positives);
          const auto& gl = r.gradients.at("f_logits");
          const auto& go = r.gradients.at("offsets");
          std::copy(gl.begin(), gl.end(), g.begin());
          std::copy(go.begin(), go.end(), g.begin() + prob->total_clips);
        } else {
          r = saliency_inter_loss(emb, prob->positives, w);
        }
        const auto& gc = r.gradients.at("clip_embeddings");
        const auto& gs = r.gradients.at("sentence_embeddings");
        std::copy(gc.begin(), gc.end(), g.begin() + prob->head);
        std::copy(gs.begin(), gs.end(), g.begin() + prob->head + gc.size());
        return r.value;
      };
      if (with_heads) {
        c.near_kink = [prob, w](std::span<const double> x, double r) {
          std::size_t oo = prob->total_clips;
          for (std::size_t b = 0; b < prob->sizes.size(); ++b) {
            const std::size_t s = prob->sizes[b];
            if (boundary_near_kink(x.subspan(oo, 2 * s), prob->labels[b], prob->tls[b], w, r)) return true;
            oo += 2 * s;
          }
          return false;
        };
      }
      return c;
    }
  }
  fail(ErrorKind::Validation, "unknown loss");
}

LossCheckSummary check_loss(CheckedLoss loss, std::size_t points, std::uint64_t seed, const LossWeights& w,
                            double epsilon, double tolerance) {
  LossCheckSummary s;
  s.name = to_string(loss);
  const std::size_t max_attempts = 20 * std::max<std::size_t>(points, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && s.checked < points; ++attempt) {
    const Checkable c = random_checkable(loss, derive_seed(seed, attempt), w);
    const GradCheckResult r = grad_check(c, epsilon, tolerance);
    if (r.skipped) {
      ++s.skipped;
      continue;
    }
    ++s.checked;
    if (!r.passed) ++s.failed;
    s.max_rel_error = std::max(s.max_rel_error, r.max_rel_error);
  }
  return s;
}

}  // namespace vtg
