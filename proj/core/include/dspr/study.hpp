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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dspr/classifier.hpp"
#include "dspr/dataset.hpp"
#include "dspr/metrics.hpp"
#include "dspr/params.hpp"
#include "dspr/risk_model.hpp"
#include "dspr/self_train.hpp"
#include "dspr/synthetic.hpp"

namespace dspr {

/// Scenarios with one rating panel each, in the same order.
struct StudyInputs {
  std::vector<Scenario> scenarios;
  std::vector<RatingPanel> panels;
};

/// Generates a suite and rates it with `profiles` on DSPR risk.
StudyInputs make_synthetic_inputs(const std::string& suite, std::uint64_t seed,
                                  const std::vector<RaterProfile>& profiles, const DsprParams& params,
                                  std::size_t threads = 1);

/// Suite directory: scenarios/<id>.jsonl, panel.csv (frame columns of every
/// scenario concatenated in suite order) and suite.json (order and frame counts).
void save_suite(const StudyInputs& inputs, const std::filesystem::path& dir);
StudyInputs load_suite(const std::filesystem::path& dir);

RatingPanel concat_panels(const std::vector<RatingPanel>& panels);
std::vector<RatingPanel> split_panel(const RatingPanel& panel, const std::vector<Scenario>& scenarios);

struct StudyConfig {
  DsprParams params;
  double ttc_cap = 10.0;
  std::size_t window_length = kDefaultWindowLength;
  double split_ratio = 0.7;
  std::uint64_t seed = 7;
  ClassThresholds thresholds;
  std::size_t smote_neighbors = 5;
  bool augment_test = true;
  SelfTrainConfig self_train;
  SoftmaxConfig classifier;
  BaselineMode baseline = BaselineMode::raw;
  std::size_t threads = 1;

  /// Throws std::invalid_argument naming the first bad setting.
  void validate() const;
};

/// Windows for every scenario (features from `model`), labels from the
/// panels, then the seeded split and SMOTE-NC balancing.
LabeledDataset build_dataset(const StudyInputs& inputs, const RiskModel& model, const StudyConfig& config);

/// Unlabeled, unsplit windows for every scenario.
std::vector<FeatureWindow> build_windows(const StudyInputs& inputs, const RiskModel& model,
                                         std::size_t window_length, std::size_t threads);

struct StudyResult {
  std::string model;
  Metrics self_trained;  // on R_T^test
  Metrics baseline;      // supervised reference on R^test
  AuditLog audit;
  std::array<std::size_t, kClassCount> train_true_counts{};
  std::array<std::size_t, kClassCount> test_true_counts{};
  std::shared_ptr<Model> final_model;
};

/// Self-training plus the supervised baseline on a prepared dataset. Throws
/// NumericError if the true test set is empty.
StudyResult study_on_dataset(const LabeledDataset& dataset, std::string model_name, Classifier& classifier,
                             const StudyConfig& config);

/// Reference-classifier settings with the study seed applied.
SoftmaxConfig seeded(const StudyConfig& config);

/// Full pipeline with the reference classifier.
StudyResult run_study(const StudyInputs& inputs, const RiskModel& model, const StudyConfig& config);

/// Same seeds and pipeline for every model; one result per model, in order.
std::vector<StudyResult> compare_models(const StudyInputs& inputs, const std::vector<RiskModel>& models,
                                        const StudyConfig& config);

}  // namespace dspr
