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

#include "../oracles.hpp"
#include "vtg/label_unify.hpp"

using vtg::ClipTimeline;
using vtg::Interval;

namespace {

void check_matches(const vtg::UnifiedLabel& got, const oracle::Label& want) {
  REQUIRE(got.size() == want.f.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got.foreground[i] == want.f[i]);
    CHECK(got.offsets[i].start == doctest::Approx(want.d_start[i]).epsilon(1e-12));
    CHECK(got.offsets[i].end == doctest::Approx(want.d_end[i]).epsilon(1e-12));
    CHECK(got.saliency[i] == want.s[i]);
  }
}

}  // namespace

TEST_SUITE("label_unify") {

TEST_CASE("interval conversion: worked example") {
  const ClipTimeline tl(5, 2.0);
  const auto l = vtg::from_intervals(tl, {{2.0, 6.0}});
  CHECK(l.foreground == std::vector<std::uint8_t>{0, 1, 1, 0, 0});
  CHECK(l.offsets[1] == vtg::Offsets{1.0, 3.0});
  CHECK(l.offsets[2] == vtg::Offsets{3.0, 1.0});
  CHECK(l.saliency == std::vector<double>{0, 1, 1, 0, 0});
  check_matches(l, oracle::containment(5, 2.0, {{2.0, 6.0}}));
}

TEST_CASE("interval conversion: full cover and empty list") {
  const ClipTimeline tl(5, 2.0);
  CHECK(vtg::from_intervals(tl, {{0.0, 10.0}}).foreground_count() == 5);
  vtg::Warnings w;
  const auto empty = vtg::from_intervals(tl, {}, &w);
  CHECK(empty.foreground_count() == 0);
  CHECK(empty.saliency == std::vector<double>(5, 0.0));
  CHECK(w.size() == 1);
}

TEST_CASE("interval conversion rejects intervals outside the video") {
  const ClipTimeline tl(5, 2.0);
  CHECK_THROWS_AS(vtg::from_intervals(tl, {{-1.0, 3.0}}), vtg::Error);
  CHECK_THROWS_AS(vtg::from_intervals(tl, {{2.0, 10.5}}), vtg::Error);
  CHECK_THROWS_AS(vtg::from_intervals(tl, {{4.0, 3.0}}), vtg::Error);
}

TEST_CASE("overlapping intervals resolve to the nearest center") {
  const ClipTimeline tl(10, 1.0);
  // Clip 4 (t = 4.5) is inside both; [3,6] has center 4.5, [0,8] has center 4.
  const std::vector<Interval> ivs{{0.0, 8.0}, {3.0, 6.0}};
  const auto l = vtg::from_intervals(tl, ivs);
  CHECK(l.offsets[4] == vtg::Offsets{1.5, 1.5});
  CHECK(l.offsets[0] == vtg::Offsets{0.5, 7.5});
  // Equal distance: the earlier start wins.
  const auto tie = vtg::from_intervals(tl, {{4.0, 5.0}, {3.0, 6.0}});
  CHECK(tie.offsets[4] == vtg::Offsets{1.5, 1.5});
  check_matches(l, oracle::containment(10, 1.0, ivs));
}

TEST_CASE("interval conversion equals the containment oracle on random inputs") {
  vtg::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(30);
    const double len = rng.uniform(0.3, 3.0);
    const ClipTimeline tl(n, len);
    std::vector<Interval> ivs;
    const std::size_t k = rng.index(4);
    for (std::size_t j = 0; j < k; ++j) ivs.push_back(oracle::random_interval(rng, tl.duration(), trial % 2 == 0));
    const auto l = vtg::from_intervals(tl, ivs);
    CHECK_NOTHROW(vtg::validate(l, tl));
    check_matches(l, oracle::containment(n, len, ivs));
  }
}

TEST_CASE("intervals_of: runs") {
  const ClipTimeline tl4(4, 2.0);
  auto l = vtg::from_intervals(tl4, {{2.0, 6.0}});
  CHECK(vtg::intervals_of(tl4, l) == std::vector<Interval>{{2.0, 6.0}});
  CHECK(vtg::intervals_of(tl4, vtg::UnifiedLabel::background(4)).empty());
  const ClipTimeline tl3(3, 2.0);
  const auto two = vtg::from_intervals(tl3, {{0.0, 2.0}, {4.0, 6.0}});
  CHECK(vtg::intervals_of(tl3, two) == std::vector<Interval>{{0.0, 2.0}, {4.0, 6.0}});
}

TEST_CASE("clip-aligned interval sets round-trip") {
  vtg::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(40);
    const double len = 0.5 * static_cast<double>(1 + rng.index(4));
    const ClipTimeline tl(n, len);
    // Separated runs: adjacent runs would merge into one.
    std::vector<Interval> ivs;
    std::size_t i = rng.index(3);
    while (i < n) {
      const std::size_t run = 1 + rng.index(5);
      const std::size_t end = std::min(n, i + run);
      ivs.push_back({tl.clip_start(i), tl.clip_end(end - 1)});
      i = end + 1 + rng.index(4);
    }
    CHECK(vtg::intervals_of(tl, vtg::from_intervals(tl, ivs)) == ivs);
  }
}

TEST_CASE("curve conversion: worked example") {
  const ClipTimeline tl(4, 2.0);
  const vtg::CurveAnnotation c{{0.20, 0.61, 0.63, 0.30}};
  const auto l = vtg::from_curve(tl, c);
  CHECK(l.foreground == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(vtg::intervals_of(tl, l) == std::vector<Interval>{{2.0, 6.0}});
  CHECK(l.offsets[1] == vtg::Offsets{1.0, 3.0});
  CHECK(l.offsets[2] == vtg::Offsets{3.0, 1.0});
  CHECK(l.saliency == std::vector<double>{0.0, 0.61, 0.63, 0.0});
  check_matches(l, oracle::curve_runs(2.0, c.values, 0.05));
}

TEST_CASE("curve conversion: two runs and constant curve") {
  const ClipTimeline tl(3, 1.0);
  const auto l = vtg::from_curve(tl, {{0.9, 0.1, 0.9}});
  CHECK(l.foreground == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(vtg::intervals_of(tl, l).size() == 2);

  vtg::Warnings w;
  const auto flat = vtg::from_curve(ClipTimeline(6, 1.0), {std::vector<double>(6, 0.5)}, 0.05, &w);
  CHECK(flat.foreground_count() == 6);
  CHECK(vtg::intervals_of(ClipTimeline(6, 1.0), flat) == std::vector<Interval>{{0.0, 6.0}});
  CHECK(w.size() == 1);
}

TEST_CASE("curve conversion: bins land on exact multiples") {
  // 0.6 / 0.05 is 11.999... in binary; it must still share the 0.60 bin.
  const ClipTimeline tl(3, 1.0);
  const auto l = vtg::from_curve(tl, {{0.6, 0.64, 0.59}});
  CHECK(l.foreground == std::vector<std::uint8_t>{1, 1, 0});
}

TEST_CASE("curve conversion rejects bad input") {
  const ClipTimeline tl(3, 1.0);
  CHECK_THROWS_AS(vtg::from_curve(tl, {{0.1, std::nan(""), 0.2}}), vtg::Error);
  CHECK_THROWS_AS(vtg::from_curve(tl, {{0.1, 0.2}}), vtg::Error);
  CHECK_THROWS_AS(vtg::from_curve(tl, {{0.1, 0.2, 0.3}}, 0.0), vtg::Error);
  CHECK_THROWS_AS(vtg::from_curve(tl, {{0.1, 0.2, 0.3}}, 1.0), vtg::Error);
}

TEST_CASE("all-zero curve yields background with a warning") {
  vtg::Warnings w;
  const auto l = vtg::from_curve(ClipTimeline(4, 1.0), {std::vector<double>(4, 0.0)}, 0.05, &w);
  CHECK(l.foreground_count() == 0);
  CHECK_FALSE(w.empty());
}

TEST_CASE("curve conversion satisfies the max-bin property and the run oracle") {
  vtg::Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(25);
    const double len = rng.uniform(0.5, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = trial % 3 == 0 ? static_cast<double>(rng.index(21)) / 20.0 : rng.uniform();
    const ClipTimeline tl(n, len);
    const auto l = vtg::from_curve(tl, {v});
    CHECK_NOTHROW(vtg::validate(l, tl));
    long top = -1;
    for (double x : v) top = std::max(top, oracle::curve_bin(x, 0.05));
    for (std::size_t i = 0; i < n; ++i) {
      if (l.foreground[i]) CHECK(oracle::curve_bin(v[i], 0.05) == top);
      else CHECK((oracle::curve_bin(v[i], 0.05) < top || v[i] == 0.0));
    }
    check_matches(l, oracle::curve_runs(len, v, 0.05));
  }
}

TEST_CASE("point conversion: mean gap windows") {
  const auto tl = ClipTimeline::from_duration(20.0, 2.0);
  const vtg::PointAnnotation p{{2.0, 10.0}};
  CHECK(vtg::point_window(tl, p) == 8.0);
  CHECK(vtg::point_intervals(tl, p) == std::vector<Interval>{{0.0, 6.0}, {6.0, 14.0}});
  const auto labels = vtg::from_points(tl, p);
  REQUIRE(labels.size() == 2);
  CHECK(vtg::intervals_of(tl, labels[0]) == std::vector<Interval>{{0.0, 6.0}});
  CHECK(vtg::intervals_of(tl, labels[1]) == std::vector<Interval>{{6.0, 14.0}});
  // The clip holding each point is foreground.
  CHECK(labels[0].foreground[1] == 1);
  CHECK(labels[1].foreground[5] == 1);
}

TEST_CASE("point conversion: single point uses two clips") {
  const auto tl = ClipTimeline::from_duration(20.0, 2.0);
  CHECK(vtg::point_intervals(tl, {{10.0}}) == std::vector<Interval>{{8.0, 12.0}});
}

TEST_CASE("point conversion rejects out-of-range points") {
  const auto tl = ClipTimeline::from_duration(20.0, 2.0);
  CHECK_THROWS_AS(vtg::from_points(tl, {{25.0}}), vtg::Error);
  CHECK_THROWS_AS(vtg::from_points(tl, {{-0.5}}), vtg::Error);
  CHECK_THROWS_AS(vtg::from_points(tl, {{}}), vtg::Error);
}

TEST_CASE("point conversion: duplicates collapse, order does not matter") {
  const auto tl = ClipTimeline::from_duration(20.0, 2.0);
  CHECK(vtg::point_intervals(tl, {{10.0, 2.0, 2.0}}) == vtg::point_intervals(tl, {{2.0, 10.0}}));
}

TEST_CASE("uniformly spaced points tile without gaps") {
  vtg::Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const double g = static_cast<double>(2 + rng.index(5));
    const std::size_t k = 2 + rng.index(5);
    const double first = g;
    std::vector<double> ts;
    for (std::size_t j = 0; j < k; ++j) ts.push_back(first + g * static_cast<double>(j));
    const auto tl = ClipTimeline::from_duration(first + g * static_cast<double>(k), 1.0);
    const auto ivs = vtg::point_intervals(tl, {ts});
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(ivs[j].length() == doctest::Approx(g));
      if (j > 0) CHECK(ivs[j].start == doctest::Approx(ivs[j - 1].end));
    }
    for (const auto& l : vtg::from_points(tl, {ts})) CHECK_NOTHROW(vtg::validate(l, tl));
  }
}

}  // TEST_SUITE
