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

#include "dspr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>

#include "dspr/geometry.hpp"

namespace dspr {

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::free_flow: return "free_flow";
    case ScenarioKind::lead_brake: return "lead_brake";
    case ScenarioKind::cut_in: return "cut_in";
    case ScenarioKind::crossing_ped: return "crossing_ped";
    case ScenarioKind::mixed: return "mixed";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& text) {
  for (auto k : {ScenarioKind::free_flow, ScenarioKind::lead_brake, ScenarioKind::cut_in,
                 ScenarioKind::crossing_ped, ScenarioKind::mixed}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown scenario kind '" + text + "'");
}

namespace {

/// Acceleration switched on at `start` and held until the next segment.
struct Segment {
  double start;
  Vec2 accel;
};

struct Actor {
  TrafficObject object;  // id, kind, footprint and initial state
  std::vector<Segment> segments;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  double sign() { return chance(0.5) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

// Per-actor integrator: exact constant-acceleration steps between frames,
// with a stop rule so braking never reverses direction.
class Track {
 public:
  explicit Track(const Actor& actor) : actor_(actor), state_(actor.object.state) {}

  KinematicState step_state(double t) {
    const Vec2 a = active(t);
    if (a != current_accel_) {
      current_accel_ = a;
      stopped_ = false;
    }
    KinematicState s = state_;
    // A stationary actor is not pushed backwards by a braking segment.
    const Vec2 facing{std::cos(s.heading), std::sin(s.heading)};
    if (norm(s.velocity) == 0.0 && dot(current_accel_, facing) < 0.0) stopped_ = true;
    s.acceleration = stopped_ ? Vec2{} : current_accel_;
    return s;
  }

  void advance(double t, double dt) {
    KinematicState s = step_state(t);
    const double v2 = dot(s.velocity, s.velocity);
    const double closing = dot(s.acceleration, s.velocity);
    if (v2 > 0.0 && closing < 0.0) {
      const double t_stop = -v2 / closing;
      if (t_stop < dt) {
        s.position = s.position + t_stop * s.velocity + (0.5 * t_stop * t_stop) * s.acceleration;
        s.velocity = {};
        stopped_ = true;
        state_ = s;
        return;
      }
    }
    KinematicState next = propagate(s, dt);
    if (norm(next.velocity) > 0.3) next.heading = std::atan2(next.velocity.y, next.velocity.x);
    state_ = next;
  }

 private:
  Vec2 active(double t) const {
    Vec2 a{};
    for (const auto& seg : actor_.segments) {
      if (seg.start <= t + 1e-9) a = seg.accel;
    }
    return a;
  }

  const Actor& actor_;
  KinematicState state_;
  Vec2 current_accel_{};
  bool stopped_ = false;
};

KinematicState moving_along_x(double x, double y, double speed) {
  KinematicState s;
  s.position = {x, y};
  s.velocity = {speed, 0.0};
  s.heading = speed < 0.0 ? std::numbers::pi : 0.0;
  return s;
}

Actor vehicle(std::string id, KinematicState state) {
  Actor a;
  a.object.id = std::move(id);
  a.object.kind = ObjectKind::vehicle;
  a.object.state = state;
  return a;
}

Actor pedestrian(std::string id, KinematicState state) {
  Actor a;
  a.object.id = std::move(id);
  a.object.kind = ObjectKind::pedestrian;
  a.object.footprint_length = a.object.footprint_width = kDefaultPedestrianSize;
  a.object.state = state;
  return a;
}

struct Layout {
  Actor ego;
  std::vector<Actor> others;
  int road = 1;
};

// Traffic two lanes over, matched to the ego speed: it never reaches the
// weak RPD (half-width 5 m plus half a car).
void add_distant_traffic(Layout& l, Rng& rng, double ego_speed, int max_cars, int max_peds) {
  const int cars = rng.integer(0, max_cars);
  for (int i = 0; i < cars; ++i) {
    const double y = rng.sign() * rng.uniform(7.5, 9.5);
    l.others.push_back(vehicle("car" + std::to_string(i), moving_along_x(rng.uniform(-40.0, 60.0), y, ego_speed)));
  }
  const int peds = rng.integer(0, max_peds);
  for (int i = 0; i < peds; ++i) {
    const double y = rng.sign() * rng.uniform(10.0, 14.0);
    const double v = rng.sign() * rng.uniform(0.8, 1.6);
    l.others.push_back(pedestrian("walker" + std::to_string(i), moving_along_x(rng.uniform(-20.0, 60.0), y, v)));
  }
}

Layout free_flow(Rng& rng) {
  Layout l;
  const double v0 = rng.uniform(3.0, 15.0);
  l.ego = vehicle("ego", moving_along_x(0.0, 0.0, v0));
  add_distant_traffic(l, rng, v0, 4, 2);
  if (l.others.empty()) {
    l.others.push_back(vehicle("car_far", moving_along_x(rng.uniform(-30.0, 50.0), 8.0, v0)));
  }
  return l;
}

Layout lead_brake(Rng& rng, double duration) {
  Layout l;
  const double v0 = rng.uniform(6.0, 15.0);
  l.ego = vehicle("ego", moving_along_x(0.0, 0.0, v0));
  const double gap = rng.uniform(45.0, 75.0);
  Actor lead = vehicle("lead", moving_along_x(gap, rng.uniform(-0.3, 0.3), v0));
  const double t_brake = rng.uniform(1.5, std::max(2.0, 0.4 * duration));
  const double a_lead = -rng.uniform(2.5, 5.5);
  lead.segments.push_back({t_brake, {a_lead, 0.0}});

  // Ego brakes after a reaction delay so that it stops 6-9 m short of the lead.
  const double react = t_brake + rng.uniform(0.7, 1.5);
  const double lead_stop = gap + v0 * t_brake + v0 * v0 / (2.0 * -a_lead);
  const double ego_at_react = v0 * react;
  const double room = lead_stop - rng.uniform(9.0, 12.0) - ego_at_react;
  const double a_ego = room > 0.0 ? std::min(kMaxSyntheticAccel, v0 * v0 / (2.0 * room)) : kMaxSyntheticAccel;
  l.ego.segments.push_back({react, {-a_ego, 0.0}});
  l.others.push_back(std::move(lead));
  add_distant_traffic(l, rng, v0, 2, 0);
  return l;
}

Layout cut_in(Rng& rng, double duration) {
  Layout l;
  const double v0 = rng.uniform(6.0, 14.0);
  l.ego = vehicle("ego", moving_along_x(0.0, 0.0, v0));
  const double side = rng.sign();
  const double lane = 3.5 * side;
  // Starts far enough ahead to sit outside the weak RPD before the manoeuvre.
  const double half_weak = 0.5 * 2.0 * (4.8 + 2.4 * v0);
  const double x0 = half_weak + rng.uniform(6.0, 20.0);
  const double dv = rng.uniform(1.0, 5.0);
  Actor cutter = vehicle("cutter", moving_along_x(x0, lane, v0 - dv));
  const double t_cut = rng.uniform(1.0, std::max(1.5, 0.35 * duration));
  const double tau = rng.uniform(1.2, 2.0);
  const double a_lat = 3.5 / (tau * tau);
  cutter.segments.push_back({t_cut, {0.0, -side * a_lat}});
  cutter.segments.push_back({t_cut + tau, {0.0, side * a_lat}});
  cutter.segments.push_back({t_cut + 2.0 * tau, {0.0, 0.0}});
  // Ego eases off once the cut-in is under way, then holds speed.
  const double a_ego = -rng.uniform(0.5, 2.5);
  l.ego.segments.push_back({t_cut + rng.uniform(0.5, 1.0), {a_ego, 0.0}});
  l.ego.segments.push_back({t_cut + 2.0 * tau + 1.0, {0.0, 0.0}});
  l.others.push_back(std::move(cutter));
  add_distant_traffic(l, rng, v0, 2, 0);
  return l;
}

Layout crossing_ped(Rng& rng, double duration) {
  Layout l;
  const double v0 = rng.uniform(4.0, 10.0);
  l.ego = vehicle("ego", moving_along_x(0.0, 0.0, v0));
  const double x_cross = rng.uniform(25.0, 45.0) + 1.5 * v0;
  const double side = rng.sign();
  const double y0 = -side * rng.uniform(5.5, 7.5);
  const double walk = rng.uniform(1.0, 1.6);
  Actor ped = pedestrian("ped", KinematicState{{x_cross, y0}, {0.0, 0.0}, {0.0, 0.0}, side * std::numbers::pi / 2});
  const double t_walk = rng.uniform(0.5, std::max(1.0, 0.25 * duration));
  ped.segments.push_back({t_walk, {0.0, side * 2.0}});
  ped.segments.push_back({t_walk + walk / 2.0, {0.0, 0.0}});

  const double t_yield = t_walk + rng.uniform(0.3, 1.2);
  const double a_yield = -rng.uniform(1.0, 3.0);
  l.ego.segments.push_back({t_yield, {a_yield, 0.0}});
  const double t_go = t_yield + rng.uniform(3.5, 6.0);
  l.ego.segments.push_back({t_go, {rng.uniform(0.8, 1.8), 0.0}});
  l.ego.segments.push_back({t_go + 3.0, {0.0, 0.0}});
  l.others.push_back(std::move(ped));

  const int parked = rng.integer(0, 2);
  for (int i = 0; i < parked; ++i) {
    const double y = rng.sign() * rng.uniform(7.5, 9.0);
    l.others.push_back(vehicle("parked" + std::to_string(i), moving_along_x(rng.uniform(10.0, 70.0), y, 0.0)));
  }
  return l;
}

Layout mixed(Rng& rng, double duration) {
  Layout base;
  switch (rng.integer(0, 2)) {
    case 0: base = lead_brake(rng, duration); break;
    case 1: base = cut_in(rng, duration); break;
    default: base = crossing_ped(rng, duration); break;
  }
  // An extra road user from another template, renamed to keep ids unique.
  Layout extra = rng.chance(0.5) ? crossing_ped(rng, duration) : free_flow(rng);
  for (auto& a : extra.others) {
    if (a.object.kind == ObjectKind::vehicle && a.object.state.velocity.x != 0.0) continue;
    a.object.id = "x_" + a.object.id;
    base.others.push_back(std::move(a));
  }
  return base;
}

}  // namespace

Scenario gen_scenario(ScenarioKind kind, double duration, std::uint64_t seed, std::string id) {
  if (!(duration >= 2.0)) throw std::invalid_argument("gen_scenario: duration must be >= 2 s");
  Rng rng(seed);
  Layout layout;
  switch (kind) {
    case ScenarioKind::free_flow: layout = free_flow(rng); break;
    case ScenarioKind::lead_brake: layout = lead_brake(rng, duration); break;
    case ScenarioKind::cut_in: layout = cut_in(rng, duration); break;
    case ScenarioKind::crossing_ped: layout = crossing_ped(rng, duration); break;
    case ScenarioKind::mixed: layout = mixed(rng, duration); break;
  }
  // Road class carries no risk signal here, so it is drawn apart from the kind.
  layout.road = Rng(seed ^ 0x70adc1a55ULL).integer(1, 6);

  Scenario scenario;
  scenario.id = id.empty() ? std::string(to_string(kind)) + "_" + std::to_string(seed) : std::move(id);
  scenario.frequency = kSyntheticFrequency;
  const double dt = 1.0 / kSyntheticFrequency;
  const auto count = static_cast<std::size_t>(std::llround(duration * kSyntheticFrequency)) + 1;

  Track ego(layout.ego);
  std::vector<Track> tracks;
  tracks.reserve(layout.others.size());
  for (const auto& a : layout.others) tracks.emplace_back(a);

  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) * dt;
    Frame f;
    f.timestamp = t;
    f.road_condition = layout.road;
    f.ego = ego.step_state(t);
    f.ego.heading = wrap_angle(f.ego.heading);
    for (std::size_t k = 0; k < tracks.size(); ++k) {
      TrafficObject obj = layout.others[k].object;
      obj.state = tracks[k].step_state(t);
      obj.state.heading = wrap_angle(obj.state.heading);
      f.objects.push_back(std::move(obj));
    }
    scenario.frames.push_back(std::move(f));
    ego.advance(t, dt);
    for (auto& tr : tracks) tr.advance(t, dt);
  }
  validate_scenario(scenario);
  return scenario;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<Scenario> gen_suite(const std::string& name, std::uint64_t seed) {
  if (name != "default") throw std::invalid_argument("unknown suite '" + name + "'");
  constexpr ScenarioKind kinds[] = {ScenarioKind::free_flow, ScenarioKind::lead_brake, ScenarioKind::cut_in,
                                    ScenarioKind::crossing_ped, ScenarioKind::mixed};
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < 40; ++i) {
    const ScenarioKind kind = kinds[i % 5];
    char id[64];
    std::snprintf(id, sizeof id, "clip%02zu_%s", i, to_string(kind));
    out.push_back(gen_scenario(kind, 15.0, splitmix(seed * 1000003ULL + i), id));
  }
  return out;
}

void RaterProfile::validate() const {
  if (!(cut_points[0] < cut_points[1] && cut_points[1] < cut_points[2])) {
    throw std::invalid_argument("rater cut-points must be strictly ascending");
  }
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("rater noise_sd must be >= 0");
}

std::vector<RaterProfile> default_panel(double noise_sd, double tolerance_spread, std::size_t raters) {
  if (!(tolerance_spread >= 1.0)) throw std::invalid_argument("tolerance spread must be >= 1");
  std::vector<RaterProfile> out(raters);
  for (std::size_t i = 0; i < raters; ++i) {
    const double u = raters == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(raters - 1);
    const double scale = std::pow(tolerance_spread, 2.0 * u - 1.0);
    for (auto& c : out[i].cut_points) c *= scale;
    out[i].noise_sd = noise_sd;
  }
  return out;
}

double aggregate_risk(const RiskVector& risk) { return *std::max_element(risk.begin(), risk.end()); }

RatingPanel simulate_raters(std::span<const RiskVector> risk_series, std::span<const RaterProfile> profiles,
                            std::uint64_t seed, std::string scenario_id) {
  if (profiles.empty()) throw std::invalid_argument("simulate_raters: need at least one rater profile");
  std::vector<double> g(risk_series.size());
  std::transform(risk_series.begin(), risk_series.end(), g.begin(), aggregate_risk);

  RatingPanel panel;
  panel.scenario_id = std::move(scenario_id);
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    const RaterProfile& prof = profiles[p];
    prof.validate();
    std::mt19937_64 rng(splitmix(seed + 0x51ed2701ULL * (p + 1)));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<int> row(g.size());
    for (std::size_t t = 0; t < g.size(); ++t) {
      const double seen = g[t >= prof.reaction_lag ? t - prof.reaction_lag : 0];
      const auto above = std::count_if(prof.cut_points.begin(), prof.cut_points.end(),
                                       [&](double c) { return c < seen; });
      // Draw unconditionally so the stream does not depend on noise_sd.
      const double e = noise(rng);
      const double value = 1.0 + static_cast<double>(above) + prof.bias + prof.noise_sd * e;
      row[t] = static_cast<int>(std::clamp(std::lround(value), 1L, 4L));
    }
    panel.ratings.push_back(std::move(row));
  }
  return panel;
}

}  // namespace dspr
