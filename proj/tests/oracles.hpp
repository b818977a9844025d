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

// Brute-force reference implementations and random instance generators.
//
// Nothing here calls into the library's algorithms: every oracle works from
// the plain definition, trading speed for obviousness.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vtg/core_types.hpp"
#include "vtg/decode.hpp"
#include "vtg/metrics.hpp"
#include "vtg/random.hpp"

namespace oracle {

using vtg::Interval;
using vtg::ScoredInterval;

inline double iou(const Interval& a, const Interval& b) {
  const double lo = std::max(a.start, b.start);
  const double hi = std::min(a.end, b.end);
  const double inter = hi > lo ? hi - lo : 0.0;
  const double uni = (a.end - a.start) + (b.end - b.start) - inter;
  if (uni <= 0.0) return (a.start == b.start && a.end == b.end) ? 1.0 : 0.0;
  return inter / uni;
}

// ---------------------------------------------------------------- labels

struct Label {
  std::vector<int> f;
  std::vector<double> d_start, d_end, s;
};

// Clip i is foreground when its center lies in some interval; overlapping
// intervals resolve to the nearest center, then smaller start, then index.
inline Label containment(std::size_t n, double clip_len, const std::vector<Interval>& ivs) {
  Label out{std::vector<int>(n, 0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * clip_len;
    long pick = -1;
    for (std::size_t k = 0; k < ivs.size(); ++k) {
      if (!(ivs[k].start <= t && t <= ivs[k].end)) continue;
      if (pick < 0) {
        pick = static_cast<long>(k);
        continue;
      }
      const Interval& a = ivs[k];
      const Interval& b = ivs[static_cast<std::size_t>(pick)];
      const double da = std::fabs((a.start + a.end) / 2.0 - t);
      const double db = std::fabs((b.start + b.end) / 2.0 - t);
      if (da < db || (da == db && a.start < b.start)) pick = static_cast<long>(k);
    }
    if (pick < 0) continue;
    const Interval& iv = ivs[static_cast<std::size_t>(pick)];
    out.f[i] = 1;
    out.d_start[i] = t - iv.start;
    out.d_end[i] = iv.end - t;
    out.s[i] = 1.0;
  }
  return out;
}

inline long curve_bin(double v, double bin) { return static_cast<long>(std::floor(v / bin + 1e-9)); }

// Every clip sharing the top bin (with a positive value) is foreground and
// points at the outer edges of its maximal foreground run.
inline Label curve_runs(double clip_len, const std::vector<double>& values, double bin) {
  const std::size_t n = values.size();
  Label out{std::vector<int>(n, 0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0)};
  long top = std::numeric_limits<long>::min();
  for (double v : values) top = std::max(top, curve_bin(std::clamp(v, 0.0, 1.0), bin));
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::clamp(values[i], 0.0, 1.0);
    if (curve_bin(v, bin) == top && v > 0.0) {
      out.f[i] = 1;
      out.s[i] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.f[i]) continue;
    std::size_t lo = i, hi = i;
    while (lo > 0 && out.f[lo - 1]) --lo;
    while (hi + 1 < n && out.f[hi + 1]) ++hi;
    const double t = (static_cast<double>(i) + 0.5) * clip_len;
    out.d_start[i] = t - static_cast<double>(lo) * clip_len;
    out.d_end[i] = static_cast<double>(hi + 1) * clip_len - t;
  }
  return out;
}

inline std::vector<Interval> runs(const std::vector<int>& f, double clip_len) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f[i] || (i > 0 && f[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < f.size() && f[j + 1]) ++j;
    out.push_back({static_cast<double>(i) * clip_len, static_cast<double>(j + 1) * clip_len});
  }
  return out;
}

// ---------------------------------------------------------------- NMS

// Position of each candidate in the visiting order (score desc, start asc,
// index asc), computed by pairwise counting rather than sorting.
inline std::vector<std::size_t> visiting_order(const std::vector<ScoredInterval>& c) {
  const std::size_t n = c.size();
  std::vector<std::size_t> at(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rank = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool before = c[j].score > c[i].score ||
                          (c[j].score == c[i].score && c[j].interval.start < c[i].interval.start) ||
                          (c[j].score == c[i].score && c[j].interval.start == c[i].interval.start && j < i);
      if (before) ++rank;
    }
    at[rank] = i;
  }
  return at;
}

// A candidate survives iff no surviving candidate visited before it overlaps
// it above the threshold; the full suppression relation is tabulated first.
inline std::vector<ScoredInterval> nms(const std::vector<ScoredInterval>& c, double thr) {
  const std::size_t n = c.size();
  std::vector<std::vector<bool>> overlaps(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) overlaps[i][j] = iou(c[i].interval, c[j].interval) > thr;
  }
  const auto order = visiting_order(c);
  std::vector<bool> alive(n, false);
  std::vector<ScoredInterval> out;
  for (std::size_t p = 0; p < n; ++p) {
    bool ok = true;
    for (std::size_t q = 0; q < p; ++q) ok = ok && !(alive[order[q]] && overlaps[order[q]][order[p]]);
    alive[order[p]] = ok;
    if (ok) out.push_back(c[order[p]]);
  }
  return out;
}

// ---------------------------------------------------------------- metrics

// Indices by descending score, earliest index first on ties.
inline std::vector<std::size_t> ranked(const std::vector<double>& scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> at(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rank = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (scores[j] > scores[i] || (scores[j] == scores[i] && j < i)) ++rank;
    }
    at[rank] = i;
  }
  return at;
}

inline std::vector<ScoredInterval> by_score(const std::vector<ScoredInterval>& p) {
  std::vector<double> s;
  for (const auto& x : p) s.push_back(x.score);
  std::vector<ScoredInterval> out;
  for (std::size_t i : ranked(s)) out.push_back(p[i]);
  return out;
}

inline std::map<double, double> recall(const std::vector<vtg::MomentEvalItem>& items, std::size_t k,
                                       const std::vector<double>& thresholds, double* miou) {
  std::map<double, double> out;
  double iou_sum = 0.0;
  for (double t : thresholds) {
    double hits = 0.0;
    for (const auto& item : items) {
      const auto p = by_score(item.predictions);
      bool hit = false;
      for (std::size_t r = 0; r < p.size() && r < k; ++r) {
        for (const auto& g : item.ground_truths) hit = hit || iou(p[r].interval, g) >= t;
      }
      hits += hit ? 1.0 : 0.0;
    }
    out[t] = items.empty() ? 0.0 : hits / static_cast<double>(items.size());
  }
  for (const auto& item : items) {
    const auto p = by_score(item.predictions);
    double best = 0.0;
    if (!p.empty()) {
      for (const auto& g : item.ground_truths) best = std::max(best, iou(p[0].interval, g));
    }
    iou_sum += best;
  }
  if (miou) *miou = items.empty() ? 0.0 : iou_sum / static_cast<double>(items.size());
  return out;
}

// Area under the full precision-recall staircase.
inline double moment_ap(const vtg::MomentEvalItem& item, double t) {
  const auto p = by_score(item.predictions);
  const std::size_t g = item.ground_truths.size();
  std::vector<bool> used(g, false);
  std::vector<double> precision, rec;
  double tp = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    long best = -1;
    double best_iou = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
      const double v = iou(p[r].interval, item.ground_truths[j]);
      if (!used[j] && v >= t && (best < 0 || v > best_iou)) {
        best = static_cast<long>(j);
        best_iou = v;
      }
    }
    if (best >= 0) {
      used[static_cast<std::size_t>(best)] = true;
      tp += 1.0;
    }
    precision.push_back(tp / static_cast<double>(r + 1));
    rec.push_back(tp / static_cast<double>(g));
  }
  double area = 0.0, prev = 0.0;
  for (std::size_t r = 0; r < rec.size(); ++r) {
    area += (rec[r] - prev) * precision[r];
    prev = rec[r];
  }
  return area;
}

// Mean over positives of precision at the positive's rank, within `cutoff`
// ranks; the denominator is capped at the cutoff.
inline double ranking_ap(const std::vector<double>& scores, const std::vector<std::uint8_t>& pos,
                         std::size_t cutoff) {
  const auto order = ranked(scores);
  std::size_t npos = 0;
  for (auto v : pos) npos += v ? 1 : 0;
  const std::size_t depth = cutoff ? std::min(cutoff, scores.size()) : scores.size();
  const std::size_t denom = cutoff ? std::min(cutoff, npos) : npos;
  if (denom == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < depth; ++r) {
    if (!pos[order[r]]) continue;
    std::size_t above = 0;
    for (std::size_t q = 0; q <= r; ++q) above += pos[order[q]] ? 1 : 0;
    sum += static_cast<double>(above) / static_cast<double>(r + 1);
  }
  return sum / static_cast<double>(denom);
}

inline double hit_at_1(const std::vector<vtg::HighlightEvalItem>& items) {
  double hits = 0.0, counted = 0.0;
  for (const auto& it : items) {
    bool any = false;
    for (auto v : it.positives) any = any || v;
    if (!any) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < it.clip_scores.size(); ++i) {
      if (it.clip_scores[i] > it.clip_scores[best]) best = i;
    }
    counted += 1.0;
    hits += it.positives[best] ? 1.0 : 0.0;
  }
  return counted > 0.0 ? hits / counted : 0.0;
}

// Maximum over every partial injective assignment rows -> columns.
inline double max_matching(const vtg::Matrix& w) {
  std::vector<bool> taken(w.cols, false);
  double best = 0.0;
  auto go = [&](auto&& self, std::size_t r, double acc) -> void {
    if (r == w.rows) {
      best = std::max(best, acc);
      return;
    }
    self(self, r + 1, acc);
    for (std::size_t c = 0; c < w.cols; ++c) {
      if (taken[c]) continue;
      taken[c] = true;
      self(self, r + 1, acc + w(r, c));
      taken[c] = false;
    }
  };
  go(go, 0, 0.0);
  return best;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> u = a, i;
  u.insert(b.begin(), b.end());
  for (const auto& x : a) {
    if (b.count(x)) i.insert(x);
  }
  return u.empty() ? 0.0 : static_cast<double>(i.size()) / static_cast<double>(u.size());
}

struct Prf {
  double p = 0.0, r = 0.0, f1 = 0.0;
};

inline Prf qfvs(const vtg::SummaryEvalItem& item) {
  const std::vector<std::size_t> a(item.predicted.begin(), item.predicted.end());
  const std::vector<std::size_t> b(item.ground_truth.begin(), item.ground_truth.end());
  vtg::Matrix w(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) w(i, j) = jaccard(item.clip_concepts.at(a[i]), item.clip_concepts.at(b[j]));
  }
  const double m = max_matching(w);
  Prf out;
  out.p = a.empty() ? 0.0 : m / static_cast<double>(a.size());
  out.r = b.empty() ? 0.0 : m / static_cast<double>(b.size());
  out.f1 = out.p + out.r > 0.0 ? 2.0 * out.p * out.r / (out.p + out.r) : 0.0;
  return out;
}

// ---------------------------------------------------------------- KTS

inline double scatter(const vtg::Matrix& k, std::size_t b, std::size_t e) {
  double tr = 0.0, all = 0.0;
  for (std::size_t i = b; i < e; ++i) tr += k(i, i);
  for (std::size_t i = b; i < e; ++i) {
    for (std::size_t j = b; j < e; ++j) all += k(i, j);
  }
  return tr - all / static_cast<double>(e - b);
}

struct Segmentation {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> starts;
};

// Best segmentation for every segment count, by enumerating every subset of
// the n - 1 possible change points (n <= 20).
inline std::vector<Segmentation> kts_exhaustive(const vtg::Matrix& k, std::size_t max_clips) {
  const std::size_t n = k.rows;
  std::vector<std::vector<double>> seg(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t e = b + 1; e <= n; ++e) seg[b][e] = scatter(k, b, e);
  }
  std::vector<Segmentation> best(n + 1);
  const std::uint32_t masks = 1u << (n - 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<std::size_t> starts{0};
    for (std::size_t c = 1; c < n; ++c) {
      if (mask & (1u << (c - 1))) starts.push_back(c);
    }
    double cost = 0.0;
    bool ok = true;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const std::size_t e = s + 1 < starts.size() ? starts[s + 1] : n;
      ok = ok && e - starts[s] <= max_clips;
      cost += seg[starts[s]][e];
    }
    if (!ok) continue;
    auto& slot = best[starts.size()];
    if (cost < slot.cost) slot = {cost, starts};
  }
  return best;
}

// ---------------------------------------------------------------- generators

inline vtg::Matrix random_features(vtg::Rng& rng, std::size_t n, std::size_t dim) {
  vtg::Matrix f(n, dim);
  for (double& v : f.data) v = rng.normal();
  return f;
}

inline vtg::Matrix gram(const vtg::Matrix& f) {
  vtg::Matrix k(f.rows, f.rows);
  for (std::size_t i = 0; i < f.rows; ++i) {
    for (std::size_t j = 0; j < f.rows; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < f.cols; ++d) s += f(i, d) * f(j, d);
      k(i, j) = s;
    }
  }
  return k;
}

// Scores drawn from a small grid so that ties actually occur.
inline double grid_score(vtg::Rng& rng) { return static_cast<double>(rng.index(6)) / 5.0; }

inline Interval random_interval(vtg::Rng& rng, double horizon, bool on_grid) {
  double a, b;
  if (on_grid) {
    a = static_cast<double>(rng.index(11)) * horizon / 10.0;
    b = static_cast<double>(rng.index(11)) * horizon / 10.0;
  } else {
    a = rng.uniform(0.0, horizon);
    b = rng.uniform(0.0, horizon);
  }
  if (a > b) std::swap(a, b);
  return {a, std::min(b, horizon)};
}

}  // namespace oracle
