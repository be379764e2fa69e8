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

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dspr/dspr_model.hpp"
#include "dspr/params.hpp"
#include "dspr/scene.hpp"

namespace dspr {

/// Any per-frame producer of a 40-slot vector. The comparison harness and
/// the dataset builder only depend on this contract.
struct RiskModel {
  std::string name;
  std::function<RiskResult(const Frame&)> evaluate;
};

RiskModel make_dspr_model(const DsprParams& params);
RiskModel make_ttc_model(double cap);

/// Evaluates every frame of a scenario, in frame order.
std::vector<RiskResult> evaluate_scenario(const RiskModel& model, const Scenario& scenario,
                                          std::size_t threads = 1);

/// Writes the risk dump header:
/// model,scenario,t,slot,triggered,tier,t_r,alpha_t,alpha_ss,alpha_ws,s_theta,E,R
void write_risk_dump_header(std::ostream& out);

/// One row per (frame, slot); empty slots are written with R=0.
void write_risk_dump(std::ostream& out, const std::string& model_name, const Scenario& scenario,
                     const std::vector<RiskResult>& results);

}  // namespace dspr
