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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../oracles.hpp"
#include "vtg/metrics.hpp"

using vtg::HighlightEvalItem;
using vtg::Interval;
using vtg::Matrix;
using vtg::MomentEvalItem;
using vtg::ScoredInterval;
using vtg::SummaryEvalItem;

namespace {

MomentEvalItem random_moment_item(vtg::Rng& rng) {
  MomentEvalItem item;
  item.query_id = "q";
  const std::size_t np = rng.index(9), ng = 1 + rng.index(8);
  for (std::size_t i = 0; i < np; ++i) {
    item.predictions.push_back({oracle::random_interval(rng, 10.0, true), oracle::grid_score(rng)});
  }
  item.predictions = oracle::by_score(item.predictions);
  for (std::size_t i = 0; i < ng; ++i) item.ground_truths.push_back(oracle::random_interval(rng, 10.0, true));
  return item;
}

HighlightEvalItem random_highlight_item(vtg::Rng& rng) {
  HighlightEvalItem item;
  const std::size_t n = 1 + rng.index(8);
  for (std::size_t i = 0; i < n; ++i) {
    item.clip_scores.push_back(oracle::grid_score(rng));
    item.positives.push_back(rng.index(3) == 0);
  }
  return item;
}

SummaryEvalItem random_summary_item(vtg::Rng& rng, std::size_t clips, std::size_t max_set) {
  static const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
  SummaryEvalItem item;
  for (std::size_t c = 0; c < clips; ++c) {
    std::set<std::string> s;
    for (const auto& w : vocab) {
      if (rng.index(3) == 0) s.insert(w);
    }
    item.clip_concepts[c] = s;
  }
  const std::size_t np = rng.index(max_set + 1), ng = rng.index(max_set + 1);
  for (std::size_t i = 0; i < np; ++i) item.predicted.insert(rng.index(clips));
  for (std::size_t i = 0; i < ng; ++i) item.ground_truth.insert(rng.index(clips));
  return item;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("temporal IoU examples") {
  CHECK(vtg::temporal_iou({2, 7}, {2, 7}) == 1.0);
  CHECK(vtg::temporal_iou({0, 10}, {5, 15}) == doctest::Approx(0.333333).epsilon(1e-6));
  CHECK(vtg::temporal_iou({0, 1}, {2, 3}) == 0.0);
  CHECK(vtg::temporal_iou({4, 4}, {4, 4}) == 1.0);
  CHECK(vtg::temporal_iou({4, 4}, {5, 5}) == 0.0);
}

TEST_CASE("threshold series") {
  const auto t = vtg::map_thresholds();
  REQUIRE(t.size() == 10);
  CHECK(t.front() == 0.5);
  CHECK(t[5] == 0.75);
  CHECK(t.back() == 0.95);
  CHECK(vtg::recall_thresholds() == std::vector<double>{0.3, 0.5, 0.7});
}

TEST_CASE("recall examples") {
  // A single prediction overlapping its ground truth at IoU 0.6.
  const MomentEvalItem item{"q", {{{0.0, 6.0}, 0.9}}, {{0.0, 10.0}}};
  const auto r = vtg::recall_at_k({item}, 1, {0.5, 0.7});
  CHECK(r.recall.at(0.5) == 1.0);
  CHECK(r.recall.at(0.7) == 0.0);
  CHECK(r.miou == doctest::Approx(0.6).epsilon(1e-15));

  const MomentEvalItem perfect{"q", {{{3.0, 5.0}, 0.2}}, {{3.0, 5.0}}};
  const auto p = vtg::recall_at_k({perfect, perfect}, 1, vtg::recall_thresholds());
  for (const auto& [t, v] : p.recall) CHECK(v == 1.0);
  CHECK(p.miou == 1.0);

  const MomentEvalItem none{"q", {}, {{3.0, 5.0}}};
  const auto z = vtg::recall_at_k({none}, 1, {0.3});
  CHECK(z.recall.at(0.3) == 0.0);
  CHECK(z.miou == 0.0);

  CHECK_THROWS_AS(vtg::recall_at_k({MomentEvalItem{"q", {}, {}}}, 1, {0.5}), vtg::Error);
  CHECK_THROWS_AS(vtg::recall_at_k({item}, 0, {0.5}), vtg::Error);
  CHECK_THROWS_AS(vtg::recall_at_k({item}, 1, {0.0}), vtg::Error);
}

TEST_CASE("moment AP examples") {
  const MomentEvalItem hit{"q", {{{0.0, 4.0}, 0.9}}, {{0.0, 4.0}}};
  CHECK(vtg::moment_average_precision(hit, 0.5) == 1.0);
  const MomentEvalItem late{"q", {{{6.0, 9.0}, 0.9}, {{0.0, 4.0}, 0.5}}, {{0.0, 4.0}}};
  CHECK(vtg::moment_average_precision(late, 0.5) == 0.5);
  // A ground truth is claimed once; the duplicate is a false positive.
  const MomentEvalItem dup{"q", {{{0.0, 4.0}, 0.9}, {{0.0, 4.0}, 0.8}}, {{0.0, 4.0}, {10.0, 12.0}}};
  CHECK(vtg::moment_average_precision(dup, 0.5) == 0.5);
  CHECK(vtg::moment_average_precision({"q", {}, {{0.0, 1.0}}}, 0.5) == 0.0);
}

TEST_CASE("moment metrics equal their oracles") {
  vtg::Rng rng(51);
  const auto thresholds = vtg::map_thresholds();
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<MomentEvalItem> items;
    for (std::size_t i = 0, n = 1 + rng.index(4); i < n; ++i) items.push_back(random_moment_item(rng));
    const std::size_t k = 1 + rng.index(3);
    double miou = 0.0;
    const auto want = oracle::recall(items, k, vtg::recall_thresholds(), &miou);
    const auto got = vtg::recall_at_k(items, k, vtg::recall_thresholds());
    for (const auto& [t, v] : want) CHECK(std::fabs(got.recall.at(t) - v) <= 1e-12);
    CHECK(std::fabs(got.miou - miou) <= 1e-12);

    const auto map = vtg::moment_map(items, thresholds);
    double avg = 0.0;
    for (double t : thresholds) {
      double m = 0.0;
      for (const auto& item : items) m += oracle::moment_ap(item, t);
      m /= static_cast<double>(items.size());
      CHECK(std::fabs(map.map.at(t) - m) <= 1e-12);
      avg += m;
    }
    CHECK(std::fabs(map.average - avg / 10.0) <= 1e-12);
  }
}

TEST_CASE("moment metric monotonicity") {
  vtg::Rng rng(52);
  const auto thresholds = vtg::map_thresholds();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MomentEvalItem> items{random_moment_item(rng), random_moment_item(rng)};
    const auto map = vtg::moment_map(items, thresholds);
    for (std::size_t i = 1; i < thresholds.size(); ++i) CHECK(map.map.at(thresholds[i]) <= map.map.at(thresholds[i - 1]));
    for (const auto& [t, v] : map.map) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    for (std::size_t k = 1; k < 5; ++k) {
      const auto a = vtg::recall_at_k(items, k, vtg::recall_thresholds());
      const auto b = vtg::recall_at_k(items, k + 1, vtg::recall_thresholds());
      for (const auto& [t, v] : a.recall) CHECK(b.recall.at(t) >= v);
    }
  }
}

TEST_CASE("hit at 1 examples") {
  const HighlightEvalItem yes{"a", {0.1, 0.9, 0.3}, {0, 1, 0}};
  const HighlightEvalItem no{"b", {0.1, 0.9, 0.3}, {1, 0, 0}};
  CHECK(vtg::hit_at_1({yes}).hit_at_1 == 1.0);
  CHECK(vtg::hit_at_1({no}).hit_at_1 == 0.0);
  CHECK(vtg::hit_at_1({yes, yes, no, yes}).hit_at_1 == 0.75);
  // Ties go to the earliest clip.
  CHECK(vtg::hit_at_1({{"c", {0.5, 0.5}, {1, 0}}}).hit_at_1 == 1.0);
  CHECK(vtg::hit_at_1({{"c", {0.5, 0.5}, {0, 1}}}).hit_at_1 == 0.0);
  const auto ex = vtg::hit_at_1({yes, {"d", {0.2, 0.1}, {0, 0}}});
  CHECK(ex.hit_at_1 == 1.0);
  CHECK(ex.excluded == 1);
  CHECK_THROWS_AS(vtg::hit_at_1({{"e", {0.2}, {0, 1}}}), vtg::Error);
}

TEST_CASE("ranking AP examples") {
  CHECK(vtg::highlight_map({{"a", {0.9, 0.8, 0.1}, {1, 1, 0}}}) == 1.0);
  CHECK(vtg::highlight_map({{"a", {0.9, 0.1}, {0, 1}}}) == 0.5);
  CHECK(vtg::top5_map({{"a", {9, 8, 7, 6, 5, 4, 3}, {1, 1, 1, 1, 1, 0, 0}}}) == 1.0);
  CHECK(vtg::top5_map({{"a", {9, 8, 7, 6, 5, 4}, {0, 0, 0, 0, 0, 1}}}) == 0.0);
  // Seven positives: the denominator is capped at five.
  CHECK(vtg::top5_map({{"a", {9, 8, 7, 6, 5, 4, 3}, {1, 1, 1, 1, 1, 1, 1}}}) == 1.0);
  CHECK(vtg::ranking_average_precision({0.5, 0.4}, {0, 0}) == 0.0);
}

TEST_CASE("highlight metrics equal their oracles") {
  vtg::Rng rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<HighlightEvalItem> items;
    for (std::size_t i = 0, n = 1 + rng.index(4); i < n; ++i) items.push_back(random_highlight_item(rng));
    CHECK(vtg::hit_at_1(items).hit_at_1 == doctest::Approx(oracle::hit_at_1(items)).epsilon(1e-12));
    double m = 0.0, m5 = 0.0;
    for (const auto& it : items) {
      m += oracle::ranking_ap(it.clip_scores, it.positives, 0);
      m5 += oracle::ranking_ap(it.clip_scores, it.positives, 5);
    }
    const double n = static_cast<double>(items.size());
    CHECK(std::fabs(vtg::highlight_map(items) - m / n) <= 1e-12);
    CHECK(std::fabs(vtg::top5_map(items) - m5 / n) <= 1e-12);
  }
}

TEST_CASE("concept IoU") {
  CHECK(vtg::concept_iou({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
  CHECK(vtg::concept_iou({"a"}, {"a"}) == 1.0);
  CHECK(vtg::concept_iou({}, {}) == 0.0);
  CHECK(vtg::concept_iou({"a"}, {"b"}) == 0.0);
}

TEST_CASE("maximum-weight matching equals exhaustive search") {
  vtg::Rng rng(54);
  for (int trial = 0; trial < 300; ++trial) {
    Matrix w(rng.index(8), rng.index(8));
    for (double& v : w.data) v = rng.index(4) == 0 ? 0.0 : rng.uniform();
    const auto m = vtg::max_weight_matching(w);
    CHECK(std::fabs(m.weight - oracle::max_matching(w)) <= 1e-12);
    REQUIRE(m.row_to_col.size() == w.rows);
    double sum = 0.0;
    std::set<long> cols;
    for (std::size_t r = 0; r < w.rows; ++r) {
      const long c = m.row_to_col[r];
      if (c < 0) continue;
      CHECK(cols.insert(c).second);
      sum += w(r, static_cast<std::size_t>(c));
    }
    CHECK(std::fabs(sum - m.weight) <= 1e-12);
  }
}

TEST_CASE("summary F1 examples") {
  SummaryEvalItem same;
  same.predicted = same.ground_truth = {0, 1};
  same.clip_concepts = {{0, {"a"}}, {1, {"b"}}};
  const auto s = vtg::qfvs_f1(same);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);

  SummaryEvalItem disjoint;
  disjoint.predicted = {0};
  disjoint.ground_truth = {1};
  disjoint.clip_concepts = {{0, {"a"}}, {1, {"b"}}};
  CHECK(vtg::qfvs_f1(disjoint).f1 == 0.0);

  SummaryEvalItem empty = disjoint;
  empty.predicted.clear();
  const auto e = vtg::qfvs_f1(empty);
  CHECK(e.precision == 0.0);
  CHECK(e.f1 == 0.0);
  CHECK(e.warnings.size() == 1);

  SummaryEvalItem missing = disjoint;
  missing.clip_concepts.erase(1);
  CHECK_THROWS_AS(vtg::qfvs_f1(missing), vtg::Error);
}

TEST_CASE("summary F1 equals the oracle and is symmetric") {
  vtg::Rng rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    const auto item = random_summary_item(rng, 12, trial % 10 == 0 ? 5 : 7);
    const auto got = vtg::qfvs_f1(item);
    const auto want = oracle::qfvs(item);
    CHECK(std::fabs(got.precision - want.p) <= 1e-12);
    CHECK(std::fabs(got.recall - want.r) <= 1e-12);
    CHECK(std::fabs(got.f1 - want.f1) <= 1e-12);
    SummaryEvalItem swapped = item;
    std::swap(swapped.predicted, swapped.ground_truth);
    const auto sw = vtg::qfvs_f1(swapped);
    CHECK(std::fabs(sw.precision - got.recall) <= 1e-12);
    CHECK(std::fabs(sw.recall - got.precision) <= 1e-12);
  }
}

TEST_CASE("perfect predictions score exactly one everywhere") {
  const MomentEvalItem m{"q", {{{1.0, 3.0}, 0.9}}, {{1.0, 3.0}}};
  CHECK(vtg::moment_map({m}, vtg::map_thresholds()).average == 1.0);
  const HighlightEvalItem h{"q", {0.1, 0.9}, {0, 1}};
  CHECK(vtg::hit_at_1({h}).hit_at_1 == 1.0);
  CHECK(vtg::highlight_map({h}) == 1.0);
  CHECK(vtg::top5_map({h}) == 1.0);
}

}  // TEST_SUITE
