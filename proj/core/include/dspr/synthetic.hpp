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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dspr/dspr_model.hpp"
#include "dspr/scene.hpp"

namespace dspr {

enum class ScenarioKind { free_flow, lead_brake, cut_in, crossing_ped, mixed };

const char* to_string(ScenarioKind kind);
/// Throws std::invalid_argument for an unknown kind name.
ScenarioKind parse_scenario_kind(const std::string& text);

inline constexpr double kSyntheticFrequency = 10.0;
inline constexpr double kMaxSyntheticSpeed = 40.0;
inline constexpr double kMaxSyntheticAccel = 6.0;

/// Seeded 10 Hz scenario built from constant-acceleration segments.
/// free_flow scenes keep every object outside the weak RPD for the whole clip.
/// Throws std::invalid_argument when duration < 2 s.
Scenario gen_scenario(ScenarioKind kind, double duration, std::uint64_t seed, std::string id = {});

/// The default study suite: 40 clips, 8 of each kind, 15 s each.
std::vector<Scenario> gen_suite(const std::string& name, std::uint64_t seed);

struct RaterProfile {
  std::array<double, 3> cut_points{5.0, 20.0, 60.0};
  double bias = 0.0;
  double noise_sd = 0.3;
  std::size_t reaction_lag = 2;  // frames

  void validate() const;
};

/// Twelve raters around the nominal cut-points {5, 20, 60}. Each rater's
/// cut-points are scaled by a tolerance factor spread geometrically over
/// [1/spread, spread]; spread = 1 gives identical raters.
std::vector<RaterProfile> default_panel(double noise_sd = 0.3, double tolerance_spread = 1.5,
                                        std::size_t raters = 12);

/// Aggregate perceived risk driving the synthetic ratings: max over slots.
double aggregate_risk(const RiskVector& risk);

/// rating = 1 + #(cut-points below g(t - lag)) + bias + N(0, noise_sd),
/// rounded and clipped to 1..4. Throws std::invalid_argument without profiles.
RatingPanel simulate_raters(std::span<const RiskVector> risk_series, std::span<const RaterProfile> profiles,
                            std::uint64_t seed, std::string scenario_id = {});

}  // namespace dspr
