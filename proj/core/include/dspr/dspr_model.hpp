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

#include "dspr/geometry.hpp"
#include "dspr/params.hpp"
#include "dspr/scene.hpp"

namespace dspr {

/// Per-object decomposition of the perceived risk.
///
/// Triggered objects carry risk = alpha_t * alpha_ss * alpha_ws * s_theta * E_p.
/// Untriggered objects carry risk = s_theta * E_e; their decay coefficients
/// are reported as 1 and t_r is empty.
struct RiskBreakdown {
  std::size_t slot = 0;
  bool triggered = false;
  std::optional<RpdTier> tier;
  std::optional<double> t_r;
  double alpha_t = 1.0;
  double alpha_ss = 1.0;
  double alpha_ws = 1.0;
  double s_theta = 0.0;
  double energy = 0.0;
  double risk = 0.0;
};

/// Slot i holds mu_i * R_i; empty slots are 0.
using RiskVector = std::array<double, kSlotCount>;

/// t_p / (t_p + t_r). Throws std::domain_error unless 0 <= t_r <= t_p.
double time_decay(double t_r, double horizon);

/// Direction-dependent observation weight, theta in [0, pi].
/// The second branch starts at exactly pi/2.
double observation_sensitivity(double theta, const DsprParams& params);

struct SpatialDecay {
  double strong = 1.0;  // alpha_ss
  double weak = 1.0;    // alpha_ws
};

/// Spatial decay coefficients. Numerators use the strong-RPD length and
/// width at the given ego speed; distances are floored at min_distance.
SpatialDecay spatial_decay(RpdTier tier, double theta_init, double d_init, double theta_contact,
                           double d_at_tr, double ego_speed, const DsprParams& params);

/// Relative kinetic energy at activation. The closing branch is taken when
/// the relative velocity projected onto the ego-to-object direction is negative.
double relative_kinetic_energy(const KinematicState& ego_at_tr, const KinematicState& obj_at_tr, ObjectKind kind,
                               const DsprParams& params);

/// 0.5 * m_s * (beta * |v_ego|)^2
double background_energy(const KinematicState& ego, ObjectKind kind, const DsprParams& params);

RiskBreakdown object_risk(const KinematicState& ego, const TrafficObject& obj, const DsprParams& params);

struct RiskResult {
  RiskVector values{};
  std::vector<RiskBreakdown> breakdowns;  // one per occupied slot, ascending slot
};

RiskResult risk_vector(const Frame& frame, const DsprParams& params);

}  // namespace dspr
