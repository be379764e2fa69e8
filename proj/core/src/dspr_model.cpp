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

#include "dspr/dspr_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dspr {

void DsprParams::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid DSPR parameter: ") + what);
  };
  require(ego_length > 0.0 && ego_width > 0.0, "ego dimensions must be positive");
  require(horizon > 0.0, "prediction horizon must be positive");
  require(thw_strong >= 0.0 && thw_strong <= thw_weak, "need 0 <= THW_s <= THW_w");
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  require(mass_vehicle > 0.0 && mass_pedestrian > 0.0, "type coefficients must be positive");
  require(min_distance > 0.0, "min_distance must be positive");
  require(scan_step > 0.0 && time_tolerance > 0.0, "solver steps must be positive");
  for (double mu : slot_sensitivity) require(std::isfinite(mu) && mu >= 0.0, "slot sensitivity must be >= 0");
}

double time_decay(double t_r, double horizon) {
  if (!(t_r >= 0.0 && t_r <= horizon)) {
    throw std::domain_error("time_decay: t_r " + std::to_string(t_r) + " outside [0, t_p]");
  }
  return horizon / (horizon + t_r);
}

double observation_sensitivity(double theta, const DsprParams& p) {
  constexpr double pi = std::numbers::pi;
  if (!(theta >= 0.0 && theta <= pi)) {
    throw std::domain_error("observation_sensitivity: angle " + std::to_string(theta) + " outside [0, pi]");
  }
  if (theta < 0.5 * pi) {
    return p.a_theta * (std::cos(2.0 * theta) + 1.0) + p.b_theta * (1.0 - std::cos(4.0 * theta)) + p.c_theta;
  }
  return p.a_theta * (std::cos(2.0 * theta - pi) + 1.0) + p.b_theta * (1.0 - std::cos(4.0 * theta - pi)) +
         p.c_theta;
}

SpatialDecay spatial_decay(RpdTier tier, double theta_init, double d_init, double theta_contact, double d_at_tr,
                           double ego_speed, const DsprParams& p) {
  const double l_s = 2.0 * (p.ego_length + p.thw_strong * ego_speed);
  const double w_s = 2.0 * p.ego_width;
  const auto coefficient = [&](double theta, double distance) {
    const double value = (l_s - std::sin(theta) * (l_s - w_s)) / std::max(distance, p.min_distance);
    return p.clamp_spatial ? std::min(value, 1.0) : value;
  };
  SpatialDecay out;
  out.strong = coefficient(theta_init, d_init);
  out.weak = tier == RpdTier::strong ? 1.0 : coefficient(theta_contact, d_at_tr);
  return out;
}

double relative_kinetic_energy(const KinematicState& ego, const KinematicState& obj, ObjectKind kind,
                               const DsprParams& p) {
  const Vec2 rel_velocity = obj.velocity - ego.velocity;
  const double v_rel = norm(rel_velocity);
  const double v_b = ego.speed() + obj.speed();
  const Vec2 offset = obj.position - ego.position;
  const double range = norm(offset);
  // Coincident centres have no line of sight; treat as fully closing.
  const double v_relp = range > 0.0 ? dot(rel_velocity, (1.0 / range) * offset) : -v_rel;

  const double m = p.mass(kind);
  const double severity = p.beta * (v_rel + v_b);
  if (v_relp < 0.0) {
    return 0.5 * m * ((1.0 - p.beta) * std::abs(v_relp) + p.beta * v_b) * severity;
  }
  return 0.5 * m * (p.beta * v_b) * severity;
}

double background_energy(const KinematicState& ego, ObjectKind kind, const DsprParams& p) {
  const double v = p.beta * ego.speed();
  return 0.5 * p.mass(kind) * v * v;
}

RiskBreakdown object_risk(const KinematicState& ego, const TrafficObject& obj, const DsprParams& p) {
  RiskBreakdown out;
  const Bearing initial = bearing(ego, obj, p.min_distance);
  out.s_theta = observation_sensitivity(initial.angle, p);

  ContactResult contact = first_contact(ego, obj, RpdTier::strong, p);
  if (!contact.triggered) contact = first_contact(ego, obj, RpdTier::weak, p);

  if (!contact.triggered) {
    out.energy = background_energy(ego, obj.kind, p);
    out.risk = out.s_theta * out.energy;
    return out;
  }

  const KinematicState ego_at = propagate(ego, contact.t_r);
  const KinematicState obj_at = propagate(obj.state, contact.t_r);
  const double d_at = std::max(norm(obj_at.position - ego_at.position), p.min_distance);

  out.triggered = true;
  out.tier = contact.tier;
  out.t_r = contact.t_r;
  out.alpha_t = time_decay(std::clamp(contact.t_r, 0.0, p.horizon), p.horizon);
  const SpatialDecay spatial =
      spatial_decay(contact.tier, initial.angle, initial.distance, contact.contact_angle, d_at, ego.speed(), p);
  out.alpha_ss = spatial.strong;
  out.alpha_ws = spatial.weak;
  out.energy = relative_kinetic_energy(ego_at, obj_at, obj.kind, p);
  out.risk = out.alpha_t * out.alpha_ss * out.alpha_ws * out.s_theta * out.energy;
  return out;
}

RiskResult risk_vector(const Frame& frame, const DsprParams& p) {
  RiskResult result;
  result.values.fill(0.0);
  const SlotTable slots = nearest_objects(frame);
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    if (slots[i] == nullptr) continue;
    RiskBreakdown b = object_risk(frame.ego, *slots[i], p);
    b.slot = i;
    result.values[i] = p.slot_sensitivity[i] * b.risk;
    result.breakdowns.push_back(b);
  }
  return result;
}

}  // namespace dspr
