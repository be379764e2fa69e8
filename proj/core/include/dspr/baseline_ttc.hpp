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

#include "dspr/dspr_model.hpp"
#include "dspr/scene.hpp"

namespace dspr {

inline constexpr double kDefaultInverseTtcCap = 10.0;  // 1/s

/// 40-slot 1/TTC vector using the same slotting as risk_vector. Non-closing
/// pairs contribute 0; values are capped at `cap`.
using TtcVector = RiskVector;

/// 1/TTC for one pair: closing rate along the ego-to-object line over range.
double inverse_ttc(const KinematicState& ego, const KinematicState& obj, double cap = kDefaultInverseTtcCap,
                   double min_distance = 0.1);

TtcVector inverse_ttc_vector(const Frame& frame, double cap = kDefaultInverseTtcCap);

/// Same as inverse_ttc_vector but with per-slot rows for the risk dump.
/// Breakdowns mark closing pairs as triggered and carry TTC in t_r.
RiskResult inverse_ttc_result(const Frame& frame, double cap = kDefaultInverseTtcCap);

}  // namespace dspr
