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

#include "vtg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vtg {

std::vector<double> map_thresholds() {
  std::vector<double> t;
  for (int k = 50; k <= 95; k += 5) t.push_back(static_cast<double>(k) / 100.0);
  return t;
}

std::vector<double> recall_thresholds() { return {0.3, 0.5, 0.7}; }

namespace {

void check_thresholds(const std::vector<double>& thresholds) {
  for (double t : thresholds) require(t > 0.0 && t <= 1.0, "IoU thresholds must lie in (0, 1]");
}

double best_iou(const Interval& p, const std::vector<Interval>& gts) {
  double best = 0.0;
  for (const auto& g : gts) best = std::max(best, temporal_iou(p, g));
  return best;
}

std::vector<ScoredInterval> by_score(const std::vector<ScoredInterval>& preds) {
  std::vector<ScoredInterval> out = preds;
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  return out;
}

}  // namespace

RecallReport recall_at_k(const std::vector<MomentEvalItem>& items, std::size_t k,
                         const std::vector<double>& thresholds) {
  require(k >= 1, "recall@k needs k >= 1");
  check_thresholds(thresholds);
  RecallReport rep;
  for (double t : thresholds) rep.recall[t] = 0.0;
  if (items.empty()) return rep;
  for (const auto& item : items) {
    require(!item.ground_truths.empty(), "query " + item.query_id + " has no ground-truth moment");
    const auto preds = by_score(item.predictions);
    double top_k_best = 0.0;
    for (std::size_t r = 0; r < std::min(k, preds.size()); ++r) {
      top_k_best = std::max(top_k_best, best_iou(preds[r].interval, item.ground_truths));
    }
    for (double t : thresholds) {
      if (top_k_best >= t) rep.recall[t] += 1.0;
    }
    if (!preds.empty()) rep.miou += best_iou(preds.front().interval, item.ground_truths);
  }
  const double n = static_cast<double>(items.size());
  for (auto& [t, v] : rep.recall) v /= n;
  rep.miou /= n;
  return rep;
}

double moment_average_precision(const MomentEvalItem& item, double threshold) {
  require(!item.ground_truths.empty(), "query " + item.query_id + " has no ground-truth moment");
  const auto preds = by_score(item.predictions);
  std::vector<bool> claimed(item.ground_truths.size(), false);
  std::size_t tp = 0;
  double ap = 0.0;
  for (std::size_t r = 0; r < preds.size(); ++r) {
    long match = -1;
    double match_iou = -1.0;
    for (std::size_t g = 0; g < item.ground_truths.size(); ++g) {
      if (claimed[g]) continue;
      const double iou = temporal_iou(preds[r].interval, item.ground_truths[g]);
      if (iou >= threshold && iou > match_iou) {
        match = static_cast<long>(g);
        match_iou = iou;
      }
    }
    if (match < 0) continue;
    claimed[static_cast<std::size_t>(match)] = true;
    ++tp;
    ap += static_cast<double>(tp) / static_cast<double>(r + 1);
  }
  return ap / static_cast<double>(item.ground_truths.size());
}

MapReport moment_map(const std::vector<MomentEvalItem>& items, const std::vector<double>& thresholds) {
  check_thresholds(thresholds);
  MapReport rep;
  for (double t : thresholds) {
    double acc = 0.0;
    for (const auto& item : items) acc += moment_average_precision(item, t);
    rep.map[t] = items.empty() ? 0.0 : acc / static_cast<double>(items.size());
  }
  if (!thresholds.empty()) {
    double acc = 0.0;
    for (double t : thresholds) acc += rep.map[t];
    rep.average = acc / static_cast<double>(thresholds.size());
  }
  return rep;
}

HitReport hit_at_1(const std::vector<HighlightEvalItem>& items) {
  HitReport rep;
  std::size_t counted = 0;
  std::size_t hits = 0;
  for (const auto& item : items) {
    require(item.clip_scores.size() == item.positives.size() && !item.clip_scores.empty(),
            "highlight item " + item.query_id + ": score/positive length mismatch");
    if (std::find(item.positives.begin(), item.positives.end(), 1) == item.positives.end()) {
      ++rep.excluded;
      continue;
    }
    // max_element returns the first maximum, i.e. the earliest clip on ties.
    const auto top = std::max_element(item.clip_scores.begin(), item.clip_scores.end()) - item.clip_scores.begin();
    ++counted;
    if (item.positives[static_cast<std::size_t>(top)]) ++hits;
  }
  rep.hit_at_1 = counted ? static_cast<double>(hits) / static_cast<double>(counted) : 0.0;
  return rep;
}

double ranking_average_precision(const std::vector<double>& scores, const std::vector<std::uint8_t>& positives,
                                 std::size_t cutoff) {
  require(scores.size() == positives.size(), "score/positive length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t npos = static_cast<std::size_t>(std::count(positives.begin(), positives.end(), 1));
  std::size_t depth = order.size();
  if (cutoff > 0) {
    depth = std::min(depth, cutoff);
    npos = std::min(npos, cutoff);
  }
  if (npos == 0) return 0.0;
  std::size_t tp = 0;
  double ap = 0.0;
  for (std::size_t r = 0; r < depth; ++r) {
    if (!positives[order[r]]) continue;
    ++tp;
    ap += static_cast<double>(tp) / static_cast<double>(r + 1);
  }
  return ap / static_cast<double>(npos);
}

namespace {

double mean_ranking_ap(const std::vector<HighlightEvalItem>& items, std::size_t cutoff) {
  if (items.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& item : items) acc += ranking_average_precision(item.clip_scores, item.positives, cutoff);
  return acc / static_cast<double>(items.size());
}

}  // namespace

double highlight_map(const std::vector<HighlightEvalItem>& items) { return mean_ranking_ap(items, 0); }

double top5_map(const std::vector<HighlightEvalItem>& items) { return mean_ranking_ap(items, 5); }

Matching max_weight_matching(const Matrix& weights) {
  Matching out;
  out.row_to_col.assign(weights.rows, -1);
  if (weights.rows == 0 || weights.cols == 0) return out;

  // The potential-based Hungarian method below assumes rows <= cols.
  const bool transposed = weights.rows > weights.cols;
  const std::size_t n = transposed ? weights.cols : weights.rows;
  const std::size_t m = transposed ? weights.rows : weights.cols;
  auto cost = [&](std::size_t i, std::size_t j) {
    return -(transposed ? weights(j - 1, i - 1) : weights(i - 1, j - 1));
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const std::size_t row = transposed ? j - 1 : p[j] - 1;
    const std::size_t col = transposed ? p[j] - 1 : j - 1;
    out.row_to_col[row] = static_cast<long>(col);
  }
  // Sum in row order so the total does not depend on the search order.
  for (std::size_t r = 0; r < weights.rows; ++r) {
    if (out.row_to_col[r] >= 0) out.weight += weights(r, static_cast<std::size_t>(out.row_to_col[r]));
  }
  return out;
}

double concept_iou(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& c : a) inter += b.count(c);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

SummaryScore qfvs_f1(const SummaryEvalItem& item) {
  SummaryScore s;
  auto concepts_of = [&](std::size_t clip) -> const std::set<std::string>& {
    auto it = item.clip_concepts.find(clip);
    require(it != item.clip_concepts.end(), "no concepts recorded for clip " + std::to_string(clip));
    return it->second;
  };
  const std::vector<std::size_t> pred(item.predicted.begin(), item.predicted.end());
  const std::vector<std::size_t> gt(item.ground_truth.begin(), item.ground_truth.end());
  Matrix w(pred.size(), gt.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) w(i, j) = concept_iou(concepts_of(pred[i]), concepts_of(gt[j]));
  }
  const double matched = max_weight_matching(w).weight;
  if (pred.empty()) s.warnings.push_back("empty predicted summary; precision reported as 0");
  if (gt.empty()) s.warnings.push_back("empty ground-truth summary; recall reported as 0");
  s.precision = pred.empty() ? 0.0 : matched / static_cast<double>(pred.size());
  s.recall = gt.empty() ? 0.0 : matched / static_cast<double>(gt.size());
  s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

}  // namespace vtg
