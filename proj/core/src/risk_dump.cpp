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

#include <array>
#include <ostream>

#include "dspr/baseline_ttc.hpp"
#include "dspr/parallel.hpp"
#include "dspr/risk_model.hpp"

namespace dspr {

RiskModel make_dspr_model(const DsprParams& params) {
  params.validate();
  return {"dspr", [params](const Frame& f) { return risk_vector(f, params); }};
}

RiskModel make_ttc_model(double cap) {
  return {"ttc", [cap](const Frame& f) { return inverse_ttc_result(f, cap); }};
}

std::vector<RiskResult> evaluate_scenario(const RiskModel& model, const Scenario& scenario,
                                          std::size_t threads) {
  std::vector<RiskResult> out(scenario.frames.size());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = model.evaluate(scenario.frames[i]); });
  return out;
}

void write_risk_dump_header(std::ostream& out) {
  out << "model,scenario,t,slot,triggered,tier,t_r,alpha_t,alpha_ss,alpha_ws,s_theta,E,R\n";
}

void write_risk_dump(std::ostream& out, const std::string& model_name, const Scenario& scenario,
                     const std::vector<RiskResult>& results) {
  const bool dspr = model_name == "dspr";
  const auto old_precision = out.precision(12);
  for (std::size_t f = 0; f < results.size(); ++f) {
    std::array<const RiskBreakdown*, kSlotCount> by_slot{};
    for (const auto& b : results[f].breakdowns) by_slot[b.slot] = &b;
    for (std::size_t s = 0; s < kSlotCount; ++s) {
      out << model_name << ',' << scenario.id << ',' << scenario.frames[f].timestamp << ',' << s << ',';
      const RiskBreakdown* b = by_slot[s];
      if (b == nullptr) {
        out << "0,,,,,,,," << results[f].values[s] << '\n';
        continue;
      }
      out << (b->triggered ? 1 : 0) << ',' << (b->tier ? to_string(*b->tier) : "") << ',';
      if (b->t_r) out << *b->t_r;
      out << ',';
      if (dspr) {
        out << b->alpha_t << ',' << b->alpha_ss << ',' << b->alpha_ws << ',' << b->s_theta << ',' << b->energy;
      } else {
        out << ",,,,";
      }
      out << ',' << results[f].values[s] << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace dspr
