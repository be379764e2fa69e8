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

#include "dspr/baseline_ttc.hpp"

#include <algorithm>

namespace dspr {

double inverse_ttc(const KinematicState& ego, const KinematicState& obj, double cap, double min_distance) {
  const Vec2 offset = obj.position - ego.position;
  const double range = std::max(norm(offset), min_distance);
  if (norm(offset) == 0.0) return cap;
  const double closing = -dot(obj.velocity - ego.velocity, (1.0 / norm(offset)) * offset);
  if (!(closing > 0.0)) return 0.0;
  return std::min(closing / range, cap);
}

RiskResult inverse_ttc_result(const Frame& frame, double cap) {
  RiskResult result;
  result.values.fill(0.0);
  const SlotTable slots = nearest_objects(frame);
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    if (slots[i] == nullptr) continue;
    RiskBreakdown b;
    b.slot = i;
    b.risk = inverse_ttc(frame.ego, slots[i]->state, cap);
    b.triggered = b.risk > 0.0;
    if (b.triggered) b.t_r = 1.0 / b.risk;
    b.s_theta = 0.0;
    result.values[i] = b.risk;
    result.breakdowns.push_back(b);
  }
  return result;
}

TtcVector inverse_ttc_vector(const Frame& frame, double cap) { return inverse_ttc_result(frame, cap).values; }

}  // namespace dspr
