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

#include "dspr/scene.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dspr {

using nlohmann::json;

double wrap_angle(double rad) {
  constexpr double pi = std::numbers::pi;
  double wrapped = std::remainder(rad, 2.0 * pi);
  if (wrapped <= -pi) wrapped += 2.0 * pi;
  // Degree round trips can land a hair above pi.
  if (wrapped > pi) wrapped = pi;
  return wrapped;
}

const char* to_string(ObjectKind kind) {
  return kind == ObjectKind::vehicle ? "vehicle" : "pedestrian";
}

ObjectKind parse_object_kind(const std::string& text) {
  if (text == "vehicle") return ObjectKind::vehicle;
  if (text == "pedestrian") return ObjectKind::pedestrian;
  throw ParseError("unknown object kind '" + text + "'");
}

namespace {

bool finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

void validate_state(const KinematicState& state, const std::string& what) {
  if (!finite(state.position) || !finite(state.velocity) || !finite(state.acceleration) ||
      !std::isfinite(state.heading)) {
    throw ValidationError(what + ": non-finite kinematic state");
  }
  if (!(state.heading > -std::numbers::pi && state.heading <= std::numbers::pi)) {
    throw ValidationError(what + ": heading outside (-pi, pi]");
  }
}

void validate_frame(const Frame& frame) {
  const std::string where = "frame t=" + std::to_string(frame.timestamp);
  if (!std::isfinite(frame.timestamp)) throw ValidationError(where + ": non-finite timestamp");
  if (frame.road_condition < kRoadClassMin || frame.road_condition > kRoadClassMax) {
    throw ValidationError(where + ": road condition " + std::to_string(frame.road_condition) +
                          " outside 1..6");
  }
  validate_state(frame.ego, where + " ego");
  std::set<std::string> ids;
  for (const auto& obj : frame.objects) {
    if (!ids.insert(obj.id).second) {
      throw ValidationError(where + ": duplicate object id '" + obj.id + "'");
    }
    if (!(obj.footprint_length > 0.0) || !(obj.footprint_width > 0.0) ||
        !std::isfinite(obj.footprint_length) || !std::isfinite(obj.footprint_width)) {
      throw ValidationError(where + ": object '" + obj.id + "' has non-positive footprint");
    }
    validate_state(obj.state, where + " object '" + obj.id + "'");
  }
}

void validate_scenario(const Scenario& scenario) {
  if (!(scenario.frequency > 0.0) || !std::isfinite(scenario.frequency)) {
    throw ValidationError("scenario '" + scenario.id + "': frequency must be positive");
  }
  const double spacing = 1.0 / scenario.frequency;
  for (std::size_t i = 0; i < scenario.frames.size(); ++i) {
    validate_frame(scenario.frames[i]);
    if (i == 0) continue;
    const double dt = scenario.frames[i].timestamp - scenario.frames[i - 1].timestamp;
    if (!(dt > 0.0)) {
      throw ValidationError("scenario '" + scenario.id + "': timestamps not strictly increasing at frame " +
                            std::to_string(i));
    }
    if (std::abs(dt - spacing) > 1e-6) {
      throw ValidationError("scenario '" + scenario.id + "': frame spacing " + std::to_string(dt) +
                            " s does not match " + std::to_string(scenario.frequency) + " Hz");
    }
  }
}

SlotTable nearest_objects(const Frame& frame) {
  struct Candidate {
    double distance;
    const TrafficObject* object;
  };
  std::vector<Candidate> vehicles;
  std::vector<Candidate> pedestrians;
  for (const auto& obj : frame.objects) {
    Candidate c{norm(obj.state.position - frame.ego.position), &obj};
    (obj.kind == ObjectKind::vehicle ? vehicles : pedestrians).push_back(c);
  }
  const auto closer = [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.object->id < b.object->id;
  };
  std::sort(vehicles.begin(), vehicles.end(), closer);
  std::sort(pedestrians.begin(), pedestrians.end(), closer);

  SlotTable slots{};
  slots.fill(nullptr);
  for (std::size_t i = 0; i < std::min(vehicles.size(), kVehicleSlots); ++i) {
    slots[i] = vehicles[i].object;
  }
  for (std::size_t i = 0; i < std::min(pedestrians.size(), kPedestrianSlots); ++i) {
    slots[kVehicleSlots + i] = pedestrians[i].object;
  }
  return slots;
}

namespace {

double number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' is not a number");
  return it->get<double>();
}

KinematicState parse_state(const json& j) {
  KinematicState s;
  s.position = {number(j, "x"), number(j, "y")};
  s.velocity = {number(j, "vx"), number(j, "vy")};
  s.acceleration = {number(j, "ax"), number(j, "ay")};
  s.heading = wrap_angle(deg_to_rad(number(j, "heading_deg")));
  return s;
}

json state_json(const KinematicState& s) {
  return json{{"x", s.position.x},         {"y", s.position.y},
              {"vx", s.velocity.x},        {"vy", s.velocity.y},
              {"ax", s.acceleration.x},    {"ay", s.acceleration.y},
              {"heading_deg", rad_to_deg(s.heading)}};
}

}  // namespace

Frame parse_frame_record(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON record: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("frame record is not a JSON object");

  Frame frame;
  frame.timestamp = number(j, "t");
  if (!j.contains("ego") || !j["ego"].is_object()) throw ParseError("missing object 'ego'");
  frame.ego = parse_state(j["ego"]);
  const double road = number(j, "road");
  if (road != std::floor(road)) throw ParseError("field 'road' is not an integer");
  frame.road_condition = static_cast<int>(road);

  if (j.contains("objects")) {
    const auto& objs = j["objects"];
    if (!objs.is_array()) throw ParseError("field 'objects' is not an array");
    for (const auto& o : objs) {
      if (!o.is_object()) throw ParseError("object entry is not a JSON object");
      TrafficObject obj;
      const auto id = o.find("id");
      if (id == o.end()) throw ParseError("object missing 'id'");
      obj.id = id->is_string() ? id->get<std::string>() : id->dump();
      const auto kind = o.find("kind");
      if (kind == o.end() || !kind->is_string()) throw ParseError("object missing 'kind'");
      obj.kind = parse_object_kind(kind->get<std::string>());
      obj.state = parse_state(o);
      if (obj.kind == ObjectKind::pedestrian) {
        obj.footprint_length = obj.footprint_width = kDefaultPedestrianSize;
      }
      if (o.contains("len")) obj.footprint_length = number(o, "len");
      if (o.contains("wid")) obj.footprint_width = number(o, "wid");
      frame.objects.push_back(std::move(obj));
    }
  }
  return frame;
}

std::string format_frame_record(const Frame& frame) {
  json objects = json::array();
  for (const auto& obj : frame.objects) {
    json o = state_json(obj.state);
    o["id"] = obj.id;
    o["kind"] = to_string(obj.kind);
    o["len"] = obj.footprint_length;
    o["wid"] = obj.footprint_width;
    objects.push_back(std::move(o));
  }
  json j{{"t", frame.timestamp},
         {"ego", state_json(frame.ego)},
         {"road", frame.road_condition},
         {"objects", std::move(objects)}};
  return j.dump();
}

Scenario parse_scenario(std::istream& in, std::string id) {
  Scenario scenario;
  scenario.id = std::move(id);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      scenario.frames.push_back(parse_frame_record(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (scenario.frames.size() >= 2) {
    const double dt = scenario.frames[1].timestamp - scenario.frames[0].timestamp;
    if (!(dt > 0.0)) {
      throw ValidationError("scenario '" + scenario.id + "': timestamps not strictly increasing at frame 1");
    }
    scenario.frequency = 1.0 / dt;
  }
  validate_scenario(scenario);
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file " + path.string());
  return parse_scenario(in, path.stem().string());
}

void write_scenario(const Scenario& scenario, std::ostream& out) {
  for (const auto& frame : scenario.frames) out << format_frame_record(frame) << '\n';
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file " + path.string());
  write_scenario(scenario, out);
}

RatingPanel parse_panel(std::istream& in, std::string scenario_id) {
  RatingPanel panel;
  panel.scenario_id = std::move(scenario_id);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<int> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("panel line " + std::to_string(line_no) + ": non-integer cell '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw ParseError("panel line " + std::to_string(line_no) + ": non-integer cell '" + cell + "'");
      }
      row.push_back(value);
    }
    if (!panel.ratings.empty() && row.size() != panel.ratings.front().size()) {
      throw ParseError("panel line " + std::to_string(line_no) + ": ragged row");
    }
    panel.ratings.push_back(std::move(row));
  }
  return panel;
}

RatingPanel load_panel(const std::filesystem::path& path, std::string scenario_id) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open panel file " + path.string());
  return parse_panel(in, std::move(scenario_id));
}

void save_panel(const RatingPanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write panel file " + path.string());
  for (const auto& row : panel.ratings) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

RatingPanel validate_panel(RatingPanel panel, const Scenario& scenario) {
  if (panel.ratings.empty()) throw ValidationError("rating panel has no participants");
  for (std::size_t p = 0; p < panel.ratings.size(); ++p) {
    auto& row = panel.ratings[p];
    if (row.size() != scenario.frames.size()) {
      throw ValidationError("rating panel row " + std::to_string(p) + " has " + std::to_string(row.size()) +
                            " columns, scenario '" + scenario.id + "' has " +
                            std::to_string(scenario.frames.size()) + " frames");
    }
    for (auto& r : row) {
      if (r < 1 || r > 5) {
        throw ValidationError("rating " + std::to_string(r) + " outside 1..5 in row " + std::to_string(p));
      }
      if (r == 5) r = 4;
    }
  }
  if (panel.scenario_id.empty()) panel.scenario_id = scenario.id;
  return panel;
}

}  // namespace dspr
