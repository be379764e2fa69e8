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
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dspr {

/// Error raised when an input file cannot be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Error raised when parsed data violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(const Vec2& v, double s) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double rad);

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Planar kinematic snapshot. Heading is counterclockwise from +x, in (-pi, pi].
struct KinematicState {
  Vec2 position;
  Vec2 velocity;
  Vec2 acceleration;
  double heading = 0.0;

  double speed() const { return norm(velocity); }
};

enum class ObjectKind { vehicle, pedestrian };

const char* to_string(ObjectKind kind);
ObjectKind parse_object_kind(const std::string& text);

inline constexpr double kDefaultVehicleLength = 4.8;
inline constexpr double kDefaultVehicleWidth = 2.0;
inline constexpr double kDefaultPedestrianSize = 0.6;

struct TrafficObject {
  std::string id;
  ObjectKind kind = ObjectKind::vehicle;
  KinematicState state;
  double footprint_length = kDefaultVehicleLength;
  double footprint_width = kDefaultVehicleWidth;
};

inline constexpr int kRoadClassMin = 1;
inline constexpr int kRoadClassMax = 6;

struct Frame {
  double timestamp = 0.0;
  KinematicState ego;
  std::vector<TrafficObject> objects;
  int road_condition = 1;
};

struct Scenario {
  std::string id;
  double frequency = 10.0;
  std::vector<Frame> frames;
};

/// Ratings matrix: one row per participant, one column per scenario frame.
struct RatingPanel {
  std::string scenario_id;
  std::vector<std::vector<int>> ratings;

  std::size_t participants() const { return ratings.size(); }
  std::size_t frames() const { return ratings.empty() ? 0 : ratings.front().size(); }
};

// Slot layout of the per-frame risk vector: 30 vehicles then 10 pedestrians.
inline constexpr std::size_t kVehicleSlots = 30;
inline constexpr std::size_t kPedestrianSlots = 10;
inline constexpr std::size_t kSlotCount = kVehicleSlots + kPedestrianSlots;

/// Slot table pointing into a Frame's object list; nullptr marks an empty slot.
using SlotTable = std::array<const TrafficObject*, kSlotCount>;

void validate_state(const KinematicState& state, const std::string& what);
void validate_frame(const Frame& frame);
void validate_scenario(const Scenario& scenario);

/// Closest 30 vehicles into slots 0..29 and closest 10 pedestrians into
/// slots 30..39, ascending center distance to ego, ties broken by id.
SlotTable nearest_objects(const Frame& frame);

/// Parses a single JSON Lines frame record.
Frame parse_frame_record(const std::string& line);
std::string format_frame_record(const Frame& frame);

/// Loads a JSON Lines scene file. The scenario id is the file stem and the
/// frequency is inferred from the first timestamp spacing (10 Hz for a
/// single-frame file).
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::istream& in, std::string id);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
void write_scenario(const Scenario& scenario, std::ostream& out);

RatingPanel load_panel(const std::filesystem::path& path, std::string scenario_id = {});
RatingPanel parse_panel(std::istream& in, std::string scenario_id = {});
void save_panel(const RatingPanel& panel, const std::filesystem::path& path);

/// Checks the panel against the scenario and merges rating 5 into 4.
RatingPanel validate_panel(RatingPanel panel, const Scenario& scenario);

}  // namespace dspr
