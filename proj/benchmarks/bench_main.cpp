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

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "dspr/classifier.hpp"
#include "dspr/dataset.hpp"
#include "dspr/dspr_model.hpp"
#include "dspr/geometry.hpp"
#include "dspr/study.hpp"
#include "dspr/synthetic.hpp"

namespace {

dspr::TrafficObject oncoming(double gap, double speed) {
  dspr::TrafficObject o;
  o.id = "lead";
  o.state.position = {gap, 0.5};
  o.state.velocity = {-speed, 0};
  o.state.heading = std::numbers::pi;
  return o;
}

void BM_FirstContact(benchmark::State& state) {
  const dspr::DsprParams p;
  dspr::KinematicState ego;
  ego.velocity = {12, 0};
  const auto obj = oncoming(static_cast<double>(state.range(0)), 8.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dspr::first_contact(ego, obj, dspr::RpdTier::weak, p));
  }
}
BENCHMARK(BM_FirstContact)->Arg(20)->Arg(60)->Arg(200);

void BM_RiskVector(benchmark::State& state) {
  const auto scenario = dspr::gen_scenario(dspr::ScenarioKind::mixed, 10.0, 3, "bench");
  const dspr::DsprParams p;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dspr::risk_vector(scenario.frames[i], p));
    i = (i + 1) % scenario.frames.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RiskVector);

void BM_SoftmaxFit(benchmark::State& state) {
  static const dspr::LabeledDataset ds = [] {
    dspr::StudyConfig cfg;
    const auto inputs = dspr::make_synthetic_inputs("default", cfg.seed, dspr::default_panel(), cfg.params);
    return dspr::build_dataset(inputs, dspr::make_dspr_model(cfg.params), cfg);
  }();
  std::vector<const dspr::FeatureWindow*> train;
  std::vector<int> labels;
  for (const auto& w : ds.windows) {
    if (w.partition == dspr::Partition::train_true) {
      train.push_back(&w);
      labels.push_back(*w.label);
    }
  }
  dspr::SoftmaxConfig cfg;
  cfg.max_iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dspr::SoftmaxClassifier(cfg).fit(train, labels));
  }
  state.counters["windows"] = static_cast<double>(train.size());
}
BENCHMARK(BM_SoftmaxFit)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
