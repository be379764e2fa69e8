// Copyright 2026 The DSPR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "dspr/dataset.hpp"
#include "dspr/risk_model.hpp"
#include "dspr/synthetic.hpp"

using namespace dspr;

namespace {

std::vector<RiskVector> risk_series(const Scenario& s, const DsprParams& p = {}) {
  std::vector<RiskVector> out;
  for (const auto& f : s.frames) out.push_back(risk_vector(f, p).values);
  return out;
}

double labeled_fraction(const RatingPanel& panel) {
  const auto fl = consistency_filter(panel, ClassThresholds{});
  double n = 0;
  for (const auto& f : fl) n += f.label ? 1 : 0;
  return n / static_cast<double>(fl.size());
}

}  // namespace

TEST_CASE("generated scenarios are valid and deterministic") {
  for (auto kind : {ScenarioKind::free_flow, ScenarioKind::lead_brake, ScenarioKind::cut_in,
                    ScenarioKind::crossing_ped, ScenarioKind::mixed}) {
    const auto a = gen_scenario(kind, 10.0, 77);
    CHECK_NOTHROW(validate_scenario(a));
    CHECK(a.frames.size() == 101);
    CHECK(a.frequency == kSyntheticFrequency);
    const auto b = gen_scenario(kind, 10.0, 77);
    CHECK(format_frame_record(a.frames[50]) == format_frame_record(b.frames[50]));
    for (const auto& f : a.frames) {
      const auto bounded = [](const KinematicState& s) {
        return s.speed() <= kMaxSyntheticSpeed + 1e-9 && norm(s.acceleration) <= kMaxSyntheticAccel + 1e-9;
      };
      CHECK(bounded(f.ego));
      for (const auto& o : f.objects) CHECK(bounded(o.state));
    }
  }
  CHECK_THROWS_AS(gen_scenario(ScenarioKind::mixed, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario_kind("traffic_jam"), std::invalid_argument);
}

TEST_CASE("free flow never triggers; lead braking does") {
  const DsprParams p;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ff = gen_scenario(ScenarioKind::free_flow, 10.0, seed);
    for (const auto& f : ff.frames) {
      for (const auto& b : risk_vector(f, p).breakdowns) CHECK_FALSE(b.triggered);
    }
    const auto lb = gen_scenario(ScenarioKind::lead_brake, 10.0, seed);
    bool strong = false;
    for (const auto& f : lb.frames) {
      for (const auto& b : risk_vector(f, p).breakdowns) strong = strong || (b.triggered && b.tier == RpdTier::strong);
    }
    CHECK(strong);
  }
}

TEST_CASE("default suite") {
  const auto suite = gen_suite("default", 7);
  CHECK(suite.size() == 40);
  CHECK_THROWS(gen_suite("other", 7));
}

TEST_CASE("rater simulation") {
  std::vector<RiskVector> series(50);
  for (std::size_t t = 0; t < series.size(); ++t) series[t][3] = 2.0 * static_cast<double>(t);
  SUBCASE("noise-free identical raters agree") {
    std::vector<RaterProfile> same(10);
    for (auto& r : same) r.noise_sd = 0.0;
    const auto panel = simulate_raters(series, same, 1);
    for (const auto& fl : consistency_filter(panel, ClassThresholds{})) CHECK(fl.consistency == 1.0);
    // Lag 2: frame t sees g(t - 2) = 2 (t - 2).
    CHECK(panel.ratings[0][4] == 1);
    CHECK(panel.ratings[0][8] == 2);
    CHECK(panel.ratings[0][20] == 3);
    CHECK(panel.ratings[0][40] == 4);
  }
  SUBCASE("low risk rates one") {
    std::vector<RiskVector> calm(30);
    for (auto& r : calm) r[0] = 1.0;
    std::vector<RaterProfile> same(5);
    for (auto& r : same) r.noise_sd = 0.0;
    for (const auto& row : simulate_raters(calm, same, 2).ratings)
      for (int v : row) CHECK(v == 1);
  }
  SUBCASE("more noise never labels more frames on average") {
    const auto s = gen_scenario(ScenarioKind::mixed, 15.0, 4);
    const auto risk = risk_series(s);
    double last = 2.0;
    for (double noise : {0.0, 0.2, 0.4, 0.8}) {
      double mean = 0.0;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        mean += labeled_fraction(simulate_raters(risk, default_panel(noise), seed));
      }
      mean /= 20.0;
      CHECK(mean <= last + 1e-12);
      last = mean;
    }
  }
  CHECK_THROWS_AS(simulate_raters(series, std::vector<RaterProfile>{}, 1), std::invalid_argument);
  RaterProfile bad;
  bad.cut_points = {5, 5, 10};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("default panel spreads tolerances") {
  const auto panel = default_panel(0.3, 1.5, 12);
  REQUIRE(panel.size() == 12);
  CHECK(panel.front().cut_points[0] == doctest::Approx(5.0 / 1.5));
  CHECK(panel.back().cut_points[2] == doctest::Approx(60.0 * 1.5));
  for (const auto& r : panel) CHECK(r.reaction_lag == 2);
  const auto flat = default_panel(0.3, 1.0, 3);
  for (const auto& r : flat) CHECK(r.cut_points[1] == doctest::Approx(20.0));
}
