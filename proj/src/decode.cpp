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

#include "vtg/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vtg {

std::vector<std::size_t> nms_1d_indices(const std::vector<ScoredInterval>& candidates, double iou_threshold) {
  require(iou_threshold > 0.0 && iou_threshold <= 1.0, "NMS threshold must lie in (0, 1]");
  for (const auto& c : candidates) {
    validate(c.interval);
    require(std::isfinite(c.score), "NMS scores must be finite");
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = candidates[a];
    const auto& cb = candidates[b];
    if (ca.score != cb.score) return ca.score > cb.score;
    return ca.interval.start < cb.interval.start;
  });

  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const Interval& c = candidates[idx].interval;
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return temporal_iou(candidates[k].interval, c) > iou_threshold;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<ScoredInterval> nms_1d(const std::vector<ScoredInterval>& candidates, double iou_threshold) {
  std::vector<ScoredInterval> kept;
  for (std::size_t idx : nms_1d_indices(candidates, iou_threshold)) kept.push_back(candidates[idx]);
  return kept;
}

std::vector<ScoredInterval> decode_moments(const PredictionSet& pred, const ClipTimeline& timeline,
                                           const MomentOptions& options) {
  validate(pred, timeline);
  std::vector<ScoredInterval> cands;
  cands.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double t = timeline.timestamp(i);
    Interval iv = clamp_to({t - pred.offsets[i].start, t + pred.offsets[i].end}, 0.0, timeline.duration());
    if (iv.start > iv.end) {
      const double mid = 0.5 * (iv.start + iv.end);
      iv = {mid, mid};
    }
    double score = sigmoid(pred.f_logits[i]);
    if (options.add_saliency) score += pred.saliency[i];
    cands.push_back({iv, score});
  }
  auto kept = nms_1d(cands, options.iou_threshold);
  if (options.top_k > 0 && kept.size() > options.top_k) kept.resize(options.top_k);
  return kept;
}

const char* to_string(HighlightMode m) { return m == HighlightMode::FOnly ? "f_only" : "f_plus_s"; }

HighlightMode highlight_mode_from_string(const std::string& s) {
  if (s == "f_plus_s") return HighlightMode::FPlusS;
  if (s == "f_only") return HighlightMode::FOnly;
  fail(ErrorKind::Validation, "unknown highlight mode '" + s + "'");
}

std::vector<double> highlight_scores(const PredictionSet& pred, HighlightMode mode) {
  std::vector<double> s(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    s[i] = sigmoid(pred.f_logits[i]);
    if (mode == HighlightMode::FPlusS) s[i] += pred.saliency.at(i);
  }
  return s;
}

namespace {

std::vector<std::size_t> rank_desc(const std::vector<double>& scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

std::vector<std::size_t> decode_highlights(const PredictionSet& pred, HighlightMode mode, std::size_t k,
                                           Warnings* warnings) {
  require(k >= 1, "highlight k must be at least 1");
  if (k > pred.size()) {
    warn(warnings, "requested " + std::to_string(k) + " highlights from " + std::to_string(pred.size()) +
                       " clips; truncated");
    k = pred.size();
  }
  auto idx = rank_desc(highlight_scores(pred, mode));
  idx.resize(k);
  return idx;
}

std::vector<std::pair<std::size_t, std::size_t>> SegmentList::ranges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    out.emplace_back(starts[s], s + 1 < starts.size() ? starts[s + 1] : num_clips);
  }
  return out;
}

void validate(const SegmentList& seg, std::size_t max_segments, std::size_t max_clips) {
  require(!seg.starts.empty() && seg.starts.front() == 0, "segments must start at clip 0");
  require(seg.count() <= max_segments, "too many segments: " + std::to_string(seg.count()));
  for (const auto& [b, e] : seg.ranges()) {
    require(e > b, "empty or unordered segment");
    require(e - b <= max_clips, "segment longer than " + std::to_string(max_clips) + " clips");
  }
  require(seg.starts.back() < seg.num_clips, "segment start past the end of the video");
}

Matrix gram_from_features(const Matrix& features) {
  const std::size_t n = features.rows;
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto a = features.row(i);
      const auto b = features.row(j);
      g(i, j) = g(j, i) = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    }
  }
  return g;
}

double segment_scatter(const Matrix& gram, std::size_t begin, std::size_t end) {
  require(begin < end && end <= gram.rows, "invalid segment range");
  double diag = 0.0;
  double block = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    diag += gram(i, i);
    for (std::size_t j = begin; j < end; ++j) block += gram(i, j);
  }
  return diag - block / static_cast<double>(end - begin);
}

KtsResult kts_segment(const Matrix& gram, const KtsOptions& options) {
  const std::size_t n = gram.rows;
  require(n >= 1 && gram.cols == n, "KTS needs a square, non-empty Gram matrix");
  require(options.max_segments >= 1 && options.max_clips >= 1, "KTS limits must be positive");
  require(options.penalty >= 0.0 && std::isfinite(options.penalty), "KTS penalty must be non-negative");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = gram(i, j), b = gram(j, i);
      require(std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}), "Gram matrix is not symmetric");
    }
    require(std::isfinite(gram(i, i)) && gram(i, i) >= -1e-12, "Gram matrix has a negative diagonal entry");
  }
  if (n > options.max_segments * options.max_clips) {
    fail(ErrorKind::Validation, "video of " + std::to_string(n) + " clips cannot be split into at most " +
                                    std::to_string(options.max_segments) + " segments of at most " +
                                    std::to_string(options.max_clips) + " clips");
  }
  const std::size_t width = std::min(options.max_clips, n);
  const std::size_t max_m = std::min(options.max_segments, n);

  // scatter[a * width + (len - 1)] for segments [a, a + len).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> scatter(n * width, inf);
  for (std::size_t a = 0; a < n; ++a) {
    double diag = 0.0;
    double block = 0.0;
    for (std::size_t len = 1; len <= width && a + len <= n; ++len) {
      const std::size_t b = a + len - 1;
      double cross = 0.0;
      for (std::size_t i = a; i < b; ++i) cross += gram(i, b);
      diag += gram(b, b);
      block += gram(b, b) + 2.0 * cross;
      scatter[a * width + len - 1] = diag - block / static_cast<double>(len);
    }
  }

  // cost[m][j]: best scatter for the first j clips in exactly m segments.
  std::vector<std::vector<double>> cost(max_m + 1, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> back(max_m + 1, std::vector<std::size_t>(n + 1, 0));
  cost[0][0] = 0.0;
  for (std::size_t m = 1; m <= max_m; ++m) {
    for (std::size_t j = m; j <= n; ++j) {
      for (std::size_t len = 1; len <= width && len <= j - (m - 1); ++len) {
        const double prev = cost[m - 1][j - len];
        if (prev == inf) continue;
        const double c = prev + scatter[(j - len) * width + len - 1];
        if (c < cost[m][j]) {
          cost[m][j] = c;
          back[m][j] = len;
        }
      }
    }
  }

  KtsResult res;
  res.scatter_by_count.assign(options.max_segments, inf);
  for (std::size_t m = 1; m <= max_m; ++m) res.scatter_by_count[m - 1] = cost[m][n];

  std::size_t best_m = 0;
  if (options.fixed_segments) {
    best_m = *options.fixed_segments;
    require(best_m >= 1 && best_m <= max_m && cost[best_m][n] < inf,
            "cannot split " + std::to_string(n) + " clips into " + std::to_string(best_m) + " segments");
  } else {
    double best = inf;
    for (std::size_t m = 1; m <= max_m; ++m) {
      if (cost[m][n] == inf) continue;
      const double md = static_cast<double>(m);
      const double objective = cost[m][n] + options.penalty * md * (std::log(static_cast<double>(n) / md) + 1.0);
      if (objective < best) {
        best = objective;
        best_m = m;
      }
    }
  }

  res.scatter = cost[best_m][n];
  res.segments.num_clips = n;
  std::size_t j = n;
  for (std::size_t m = best_m; m >= 1; --m) {
    j -= back[m][j];
    res.segments.starts.push_back(j);
  }
  std::reverse(res.segments.starts.begin(), res.segments.starts.end());
  return res;
}

const char* to_string(SegmentAggregate a) { return a == SegmentAggregate::Max ? "max" : "mean"; }

SegmentAggregate segment_aggregate_from_string(const std::string& s) {
  if (s == "mean") return SegmentAggregate::Mean;
  if (s == "max") return SegmentAggregate::Max;
  fail(ErrorKind::Validation, "unknown segment aggregate '" + s + "'");
}

std::size_t summary_budget(std::size_t num_clips, double budget_fraction) {
  require(budget_fraction > 0.0 && budget_fraction <= 1.0, "summary budget must lie in (0, 1]");
  const auto b = static_cast<std::size_t>(std::floor(budget_fraction * static_cast<double>(num_clips) + 1e-9));
  return std::max<std::size_t>(1, b);
}

SummaryResult decode_summary(const PredictionSet& pred, const SegmentList& segments, double budget_fraction,
                             SegmentAggregate aggregate) {
  require(segments.num_clips == pred.size(), "segmentation and prediction disagree on clip count");
  SummaryResult res;
  res.budget = summary_budget(pred.size(), budget_fraction);
  const auto scores = highlight_scores(pred, HighlightMode::FOnly);
  auto idx = rank_desc(scores);
  idx.resize(std::min(res.budget, idx.size()));
  std::sort(idx.begin(), idx.end());
  res.clips = std::move(idx);
  for (const auto& [b, e] : segments.ranges()) {
    double acc = aggregate == SegmentAggregate::Max ? -std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = b; i < e; ++i) acc = aggregate == SegmentAggregate::Max ? std::max(acc, scores[i]) : acc + scores[i];
    if (aggregate == SegmentAggregate::Mean) acc /= static_cast<double>(e - b);
    res.segment_scores.push_back(acc);
  }
  return res;
}

}  // namespace vtg
