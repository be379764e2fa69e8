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
#include <optional>
#include <utility>
#include <vector>

#include "dspr/params.hpp"
#include "dspr/scene.hpp"

namespace dspr {

struct OrientedRect {
  Vec2 center;
  double half_length = 0.0;
  double half_width = 0.0;
  double heading = 0.0;

  std::array<Vec2, 4> corners() const;
};

/// Separating-axis overlap test. Touching rectangles count as intersecting.
bool intersects(const OrientedRect& a, const OrientedRect& b);

/// Convex overlap polygon of two rectangles (empty when disjoint).
std::vector<Vec2> overlap_polygon(const OrientedRect& a, const OrientedRect& b);

enum class RpdTier { strong, weak };

const char* to_string(RpdTier tier);

struct ContactResult {
  bool triggered = false;
  RpdTier tier = RpdTier::weak;
  double t_r = 0.0;       // only meaningful when triggered
  Vec2 contact_point;     // world frame, at t_r
  double contact_angle = 0.0;  // [0, pi], ego-heading frame at t_r
};

/// Constant-acceleration propagation; heading is held.
KinematicState propagate(const KinematicState& state, double dt);

/// Risk perception domain centred on the ego, aligned with its heading.
/// Length 2(L + THW * speed); width 5W (weak) or 2W (strong).
OrientedRect rpd_rect(const KinematicState& ego, RpdTier tier, const DsprParams& params);

OrientedRect footprint(const TrafficObject& obj, const KinematicState& state);
inline OrientedRect footprint(const TrafficObject& obj) { return footprint(obj, obj.state); }

/// Earliest time in [0, horizon] at which the propagated object overlaps the
/// propagated RPD of the given tier. Sampled separating-axis scan followed by
/// bisection down to params.time_tolerance.
ContactResult first_contact(const KinematicState& ego, const TrafficObject& obj, RpdTier tier,
                            const DsprParams& params);

struct Bearing {
  double angle = 0.0;     // [0, pi]; 0 dead ahead, pi dead astern
  double distance = 0.0;  // center to center, floored at min_distance
};

Bearing bearing(const KinematicState& ego, const TrafficObject& obj, double min_distance = 0.1);
Bearing bearing(const KinematicState& ego, const Vec2& point, double min_distance = 0.1);

/// Bearing of the contact point in the ego-heading frame at activation.
/// Throws std::invalid_argument for an untriggered contact.
double contact_angle(const ContactResult& contact, const KinematicState& ego_at_tr);

}  // namespace dspr
