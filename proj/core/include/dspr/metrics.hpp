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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dspr/classifier.hpp"

namespace dspr {

struct ClassMetrics {
  int label = 0;
  std::size_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> auc;  // empty when the class is absent from truth
};

/// Metrics over K classes. Macro averages run over classes present in the
/// ground truth; a class never predicted has precision 0.
struct Metrics {
  std::size_t total = 0;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> macro_auc;
  std::vector<int> omitted_auc_classes;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  std::vector<ClassMetrics> per_class;
};

/// Precision/recall/F1/accuracy from a K x K confusion matrix (rows = truth).
Metrics metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion);

/// Area under the ROC curve via the rank-sum statistic (ties share ranks).
/// Empty when either class is missing.
std::optional<double> binary_auc(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// Full metrics for labels 1..4 with one-vs-rest macro AUC.
/// Throws std::invalid_argument on an empty set.
Metrics compute_metrics(std::span<const int> truth, std::span<const ProbabilityRow> probabilities);

Metrics evaluate(const Model& model, const WindowRefs& windows, std::span<const int> labels);

std::string metrics_json(const Metrics& m, int indent = 2);

}  // namespace dspr
