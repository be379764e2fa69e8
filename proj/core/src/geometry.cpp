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

#include "dspr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dspr {

namespace {

Vec2 unit(double heading) { return {std::cos(heading), std::sin(heading)}; }
Vec2 normal(double heading) { return {-std::sin(heading), std::cos(heading)}; }

double radius_along(const OrientedRect& r, const Vec2& axis) {
  return r.half_length * std::abs(dot(unit(r.heading), axis)) +
         r.half_width * std::abs(dot(normal(r.heading), axis));
}

bool separated_on(const OrientedRect& a, const OrientedRect& b, const Vec2& axis) {
  const double gap = std::abs(dot(b.center - a.center, axis));
  return gap > radius_along(a, axis) + radius_along(b, axis);
}

// Sutherland-Hodgman clip against the half-plane dot(p, axis) <= limit.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Vec2& axis, double limit) {
  std::vector<Vec2> out;
  if (poly.empty()) return out;
  constexpr double eps = 1e-12;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % poly.size()];
    const double dc = dot(cur, axis) - limit;
    const double dn = dot(nxt, axis) - limit;
    const bool cur_in = dc <= eps;
    const bool nxt_in = dn <= eps;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in) {
      const double s = dc / (dc - dn);
      out.push_back(cur + s * (nxt - cur));
    }
  }
  return out;
}

Vec2 vertex_mean(const std::vector<Vec2>& poly) {
  Vec2 sum;
  for (const auto& p : poly) sum += p;
  return (1.0 / static_cast<double>(poly.size())) * sum;
}

// Closest point of the rectangle to p.
Vec2 clamp_into(const OrientedRect& r, const Vec2& p) {
  const Vec2 u = unit(r.heading);
  const Vec2 n = normal(r.heading);
  const Vec2 d = p - r.center;
  const double lx = std::clamp(dot(d, u), -r.half_length, r.half_length);
  const double ly = std::clamp(dot(d, n), -r.half_width, r.half_width);
  return r.center + lx * u + ly * n;
}

}  // namespace

std::array<Vec2, 4> OrientedRect::corners() const {
  const Vec2 u = half_length * unit(heading);
  const Vec2 n = half_width * normal(heading);
  return {center + u + n, center - u + n, center - u - n, center + u - n};
}

bool intersects(const OrientedRect& a, const OrientedRect& b) {
  for (const auto& axis : {unit(a.heading), normal(a.heading), unit(b.heading), normal(b.heading)}) {
    if (separated_on(a, b, axis)) return false;
  }
  return true;
}

std::vector<Vec2> overlap_polygon(const OrientedRect& a, const OrientedRect& b) {
  const auto c = b.corners();
  std::vector<Vec2> poly(c.begin(), c.end());
  const Vec2 u = unit(a.heading);
  const Vec2 n = normal(a.heading);
  const double cu = dot(a.center, u);
  const double cn = dot(a.center, n);
  poly = clip(poly, u, cu + a.half_length);
  poly = clip(poly, -1.0 * u, -(cu - a.half_length));
  poly = clip(poly, n, cn + a.half_width);
  poly = clip(poly, -1.0 * n, -(cn - a.half_width));
  return poly;
}

const char* to_string(RpdTier tier) { return tier == RpdTier::strong ? "strong" : "weak"; }

KinematicState propagate(const KinematicState& state, double dt) {
  KinematicState out = state;
  out.position = state.position + dt * state.velocity + (0.5 * dt * dt) * state.acceleration;
  out.velocity = state.velocity + dt * state.acceleration;
  return out;
}

OrientedRect rpd_rect(const KinematicState& ego, RpdTier tier, const DsprParams& params) {
  const double thw = tier == RpdTier::strong ? params.thw_strong : params.thw_weak;
  const double width = (tier == RpdTier::strong ? 2.0 : 5.0) * params.ego_width;
  const double length = 2.0 * (params.ego_length + thw * ego.speed());
  return {ego.position, 0.5 * length, 0.5 * width, ego.heading};
}

OrientedRect footprint(const TrafficObject& obj, const KinematicState& state) {
  return {state.position, 0.5 * obj.footprint_length, 0.5 * obj.footprint_width, state.heading};
}

ContactResult first_contact(const KinematicState& ego, const TrafficObject& obj, RpdTier tier,
                            const DsprParams& params) {
  const auto rects_at = [&](double tau) {
    // propagate() holds heading, so the RPD keeps the current ego heading.
    return std::pair{rpd_rect(propagate(ego, tau), tier, params), footprint(obj, propagate(obj.state, tau))};
  };
  const auto overlapping = [&](double tau) {
    const auto [rpd, body] = rects_at(tau);
    return intersects(rpd, body);
  };

  ContactResult result;
  result.tier = tier;

  double hit = -1.0;
  if (overlapping(0.0)) {
    hit = 0.0;
  } else {
    const double horizon = params.horizon;
    const auto steps = static_cast<long>(std::ceil(horizon / params.scan_step - 1e-9));
    double prev = 0.0;
    for (long k = 1; k <= steps; ++k) {
      const double tau = std::min(static_cast<double>(k) * params.scan_step, horizon);
      if (overlapping(tau)) {
        double lo = prev;
        double hi = tau;
        while (hi - lo > params.time_tolerance) {
          const double mid = 0.5 * (lo + hi);
          (overlapping(mid) ? hi : lo) = mid;
        }
        hit = hi;
        break;
      }
      prev = tau;
    }
  }
  if (hit < 0.0) return result;

  result.triggered = true;
  result.t_r = hit;
  const auto [rpd, body] = rects_at(hit);
  const auto poly = overlap_polygon(rpd, body);
  result.contact_point = poly.empty() ? clamp_into(rpd, body.center) : vertex_mean(poly);
  result.contact_angle = contact_angle(result, propagate(ego, hit));
  return result;
}

Bearing bearing(const KinematicState& ego, const Vec2& point, double min_distance) {
  const Vec2 rel = point - ego.position;
  const double dist = norm(rel);
  Bearing b;
  b.distance = std::max(dist, min_distance);
  if (dist == 0.0) return b;
  const double along = dot(rel, unit(ego.heading));
  const double across = dot(rel, normal(ego.heading));
  b.angle = std::abs(std::atan2(across, along));
  return b;
}

Bearing bearing(const KinematicState& ego, const TrafficObject& obj, double min_distance) {
  return bearing(ego, obj.state.position, min_distance);
}

double contact_angle(const ContactResult& contact, const KinematicState& ego_at_tr) {
  if (!contact.triggered) throw std::invalid_argument("contact_angle: contact was not triggered");
  return bearing(ego_at_tr, contact.contact_point, 0.0).angle;
}

}  // namespace dspr
