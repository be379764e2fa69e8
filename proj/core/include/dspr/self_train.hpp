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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dspr/classifier.hpp"
#include "dspr/dataset.hpp"
#include "dspr/metrics.hpp"

namespace dspr {

struct SelfTrainConfig {
  double epsilon = 0.9;        // adopt when max class probability > epsilon
  std::size_t iterations = 5;
  bool discard_residual = true;  // false: residual windows take their last argmax label

  void validate() const;
};

struct AuditEntry {
  std::size_t iteration = 0;      // 1-based
  std::size_t training_size = 0;  // |R_T| + |R_P| used for this iteration's model
  std::size_t candidates = 0;     // |R_U| before adoption
  std::size_t adopted = 0;
  std::size_t pseudo_total = 0;   // |R_P| after adoption
  std::array<std::size_t, kClassCount> adopted_by_class{};
};

struct Adoption {
  std::size_t window = 0;
  int label = 0;
  std::size_t iteration = 0;
  double confidence = 0.0;
};

struct AuditLog {
  std::vector<AuditEntry> entries;
  std::vector<Adoption> adoptions;
  std::size_t residual = 0;           // unlabeled windows left after the last iteration
  std::size_t final_training_size = 0;

  /// Deterministic CSV rendering: per-iteration rows then per-window adoptions.
  std::string to_csv() const;
};

struct SelfTrainResult {
  std::unique_ptr<Model> model;
  AuditLog audit;
  std::optional<Metrics> test_metrics;  // on R_T^test; empty when that partition is empty
};

/// Self-training: train on the true training set, pseudo-label confident
/// unlabeled windows, retrain on the union, repeat, then fit the final model
/// and evaluate it on the true test set. Throws std::invalid_argument when
/// the true training set is empty.
SelfTrainResult self_train(const LabeledDataset& dataset, Classifier& classifier, const SelfTrainConfig& config);

enum class BaselineMode { raw, plurality, filtered };

const char* to_string(BaselineMode mode);
BaselineMode parse_baseline_mode(const std::string& text);

/// Supervised reference point on the original (non-synthetic) windows.
/// raw: every individual rating is a sample, in training (as weighted
/// window/rating pairs) and in evaluation. plurality: one sample per window
/// with its plurality label. filtered: trains on the balanced true training
/// set and is scored like plurality.
Metrics supervised_baseline(const LabeledDataset& dataset, Classifier& classifier, BaselineMode mode);

}  // namespace dspr
