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

#include "dspr/scene.hpp"

namespace dspr {

/// Constants of the perceived-risk model plus solver tolerances.
/// Defaults are the published calibration.
struct DsprParams {
  double ego_length = 4.8;  // L, m
  double ego_width = 2.0;   // W, m
  double horizon = 4.0;     // t_p, s
  double thw_weak = 2.4;    // s
  double thw_strong = 1.2;  // s

  // Observation sensitivity shape.
  double a_theta = 1.0;
  double b_theta = 0.4;
  double c_theta = 0.5;

  double beta = 0.12;
  double mass_vehicle = 5.0;
  double mass_pedestrian = 10.0;

  std::array<double, kSlotCount> slot_sensitivity = filled(1.0);  // mu_i

  double min_distance = 0.1;   // d_min, m
  double scan_step = 0.01;     // s
  double time_tolerance = 1e-7;  // s, bisection bracket width
  bool clamp_spatial = true;

  double mass(ObjectKind kind) const {
    return kind == ObjectKind::vehicle ? mass_vehicle : mass_pedestrian;
  }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

 private:
  static constexpr std::array<double, kSlotCount> filled(double v) {
    std::array<double, kSlotCount> a{};
    a.fill(v);
    return a;
  }
};

}  // namespace dspr
