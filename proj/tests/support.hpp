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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <string>

#include "dspr/scene.hpp"

namespace testing {

inline dspr::TrafficObject vehicle(std::string id, double x, double y, double vx = 0.0, double vy = 0.0,
                                   double heading = 0.0) {
  dspr::TrafficObject o;
  o.id = std::move(id);
  o.state.position = {x, y};
  o.state.velocity = {vx, vy};
  o.state.heading = heading;
  return o;
}

inline dspr::TrafficObject pedestrian(std::string id, double x, double y, double vx = 0.0, double vy = 0.0) {
  auto o = vehicle(std::move(id), x, y, vx, vy);
  o.kind = dspr::ObjectKind::pedestrian;
  o.footprint_length = o.footprint_width = dspr::kDefaultPedestrianSize;
  return o;
}

inline dspr::KinematicState ego(double vx = 0.0, double heading = 0.0) {
  dspr::KinematicState s;
  s.velocity = {vx, 0.0};
  s.heading = heading;
  return s;
}

// Unique scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("dspr_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
