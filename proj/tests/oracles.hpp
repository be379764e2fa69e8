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

// Independent reference implementations used to check the library. Nothing
// here calls into dspr geometry or risk code; formulas are written out again
// from first principles.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "dspr/params.hpp"
#include "dspr/scene.hpp"

namespace oracle {

struct P {
  double x, y;
};

struct Body {
  double x, y, vx, vy, ax, ay, heading;
};

inline Body at(const Body& b, double t) {
  return {b.x + b.vx * t + 0.5 * b.ax * t * t, b.y + b.vy * t + 0.5 * b.ay * t * t, b.vx + b.ax * t,
          b.vy + b.ay * t, b.ax, b.ay, b.heading};
}

inline std::array<P, 4> box(double cx, double cy, double length, double width, double heading) {
  const double c = std::cos(heading), s = std::sin(heading);
  const double hl = length / 2, hw = width / 2;
  std::array<P, 4> out;
  const double sx[4] = {1, -1, -1, 1};
  const double sy[4] = {1, 1, -1, -1};
  for (int i = 0; i < 4; ++i) {
    out[i] = {cx + c * hl * sx[i] - s * hw * sy[i], cy + s * hl * sx[i] + c * hw * sy[i]};
  }
  return out;
}

// Separating-axis test for two convex quadrilaterals; touching counts as overlap.
inline bool overlap(const std::array<P, 4>& a, const std::array<P, 4>& b) {
  auto separated_on_edges = [](const std::array<P, 4>& p, const std::array<P, 4>& q) {
    for (int i = 0; i < 4; ++i) {
      const P e{p[(i + 1) % 4].x - p[i].x, p[(i + 1) % 4].y - p[i].y};
      const P n{-e.y, e.x};
      double pmin = 1e300, pmax = -1e300, qmin = 1e300, qmax = -1e300;
      for (int k = 0; k < 4; ++k) {
        const double u = n.x * p[k].x + n.y * p[k].y;
        const double v = n.x * q[k].x + n.y * q[k].y;
        pmin = std::min(pmin, u);
        pmax = std::max(pmax, u);
        qmin = std::min(qmin, v);
        qmax = std::max(qmax, v);
      }
      if (pmax < qmin || qmax < pmin) return true;
    }
    return false;
  };
  return !separated_on_edges(a, b) && !separated_on_edges(b, a);
}

struct Tier {
  double thw;
  double width_factor;
};

inline Tier strong(const dspr::DsprParams& p) { return {p.thw_strong, 2.0}; }
inline Tier weak(const dspr::DsprParams& p) { return {p.thw_weak, 5.0}; }

inline std::array<P, 4> rpd(const Body& ego, Tier tier, const dspr::DsprParams& p) {
  const double v = std::hypot(ego.vx, ego.vy);
  return box(ego.x, ego.y, 2.0 * (p.ego_length + tier.thw * v), tier.width_factor * p.ego_width, ego.heading);
}

// First sampled instant on a uniform grid at which the object's footprint
// touches the RPD; no refinement.
inline std::optional<double> dense_scan(const Body& ego, const Body& obj, double obj_length, double obj_width,
                                        Tier tier, const dspr::DsprParams& p, double dt = 1e-4) {
  const auto steps = static_cast<long>(std::floor(p.horizon / dt + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(k * dt, p.horizon);
    const Body e = at(ego, t), o = at(obj, t);
    if (overlap(rpd(e, tier, p), box(o.x, o.y, obj_length, obj_width, o.heading))) return t;
  }
  return std::nullopt;
}

// Direct-substitution formulas.
inline double alpha_t(double t_r, double t_p) { return t_p / (t_p + t_r); }

inline double s_theta(double th, double A, double B, double C) {
  const double pi = std::numbers::pi;
  if (th < pi / 2) return A * (std::cos(2 * th) + 1) + B * (1 - std::cos(4 * th)) + C;
  return A * (std::cos(2 * th - pi) + 1) + B * (1 - std::cos(4 * th - pi)) + C;
}

// Closing branch: E = m/2 ((1-b)|vp| + b vb)(b (vrel + vb)); otherwise E = m/2 (b vb)(b (vrel + vb)).
inline double energy(double m, double beta, double v_rel, double v_b, double v_relp) {
  const double tail = beta * (v_rel + v_b);
  if (v_relp < 0) return 0.5 * m * ((1 - beta) * std::fabs(v_relp) + beta * v_b) * tail;
  return 0.5 * m * (beta * v_b) * tail;
}

inline double background(double m, double beta, double v_ego) { return 0.5 * m * (beta * v_ego) * (beta * v_ego); }

inline dspr::KinematicState state(const Body& b) {
  dspr::KinematicState s;
  s.position = {b.x, b.y};
  s.velocity = {b.vx, b.vy};
  s.acceleration = {b.ax, b.ay};
  s.heading = b.heading;
  return s;
}

struct Encounter {
  Body ego;
  Body obj;
  double length;
  double width;
};

// Random ego/object pair with bounded kinematics, mostly headed into each
// other's neighbourhood so that a good share of pairs trigger.
inline Encounter random_encounter(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto range = [&](double a, double b) { return a + (b - a) * u(rng); };
  const double pi = std::numbers::pi;
  Encounter e;
  const double eh = range(-pi, pi);
  const double ev = range(0.0, 20.0);
  e.ego = {range(-5, 5), range(-5, 5), ev * std::cos(eh), ev * std::sin(eh), range(-3, 3), range(-1, 1), eh};
  const double bearing = range(-pi, pi);
  const double dist = range(5.0, 80.0);
  const double ox = e.ego.x + dist * std::cos(bearing);
  const double oy = e.ego.y + dist * std::sin(bearing);
  const double toward = std::atan2(e.ego.y - oy, e.ego.x - ox) + range(-0.6, 0.6);
  const double ov = range(0.0, 25.0);
  e.obj = {ox, oy, ov * std::cos(toward), ov * std::sin(toward), range(-3, 3), range(-3, 3), toward};
  if (u(rng) < 0.3) {
    e.length = e.width = 0.6;
  } else {
    e.length = range(3.5, 6.0);
    e.width = range(1.6, 2.4);
  }
  return e;
}

}  // namespace oracle
