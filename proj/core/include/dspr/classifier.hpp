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
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dspr/dataset.hpp"

namespace dspr {

/// Raised when a computation produces non-finite or otherwise invalid numbers.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WindowRefs = std::vector<const FeatureWindow*>;
using ProbabilityRow = std::array<double, kClassCount>;

/// Trained model: maps windows to class probabilities (classes 1..4 in order).
class Model {
 public:
  virtual ~Model() = default;
  virtual std::vector<ProbabilityRow> predict_proba(const WindowRefs& windows) const = 0;
};

/// Training half of the classifier contract. Labels are 1..4.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  /// `weights` is empty (all ones) or one nonnegative weight per window.
  virtual std::unique_ptr<Model> train(const WindowRefs& windows, std::span<const int> labels,
                                       std::span<const double> weights = {}) = 0;
};

/// Throws NumericError unless every row is nonnegative and sums to 1 +- 1e-6.
void check_simplex(std::span<const ProbabilityRow> rows);

/// predict_proba followed by check_simplex; every engine call path uses this.
std::vector<ProbabilityRow> predict_checked(const Model& model, const WindowRefs& windows);

/// Index of the most probable class as a label 1..4 (ties to the lower class).
int predicted_label(const ProbabilityRow& row);

WindowRefs window_refs(const std::vector<FeatureWindow>& windows, std::span<const std::size_t> indices);

/// Index of the derived per-row peak risk (max over the risk columns) in the
/// standardizer vectors; it follows the 46 feature columns.
inline constexpr std::size_t kPeakColumn = kFeatureWidth;
inline constexpr std::size_t kStandardizedColumns = kFeatureWidth + 1;

/// Per-column z-score statistics for the 45 continuous columns of a feature
/// row plus the row's peak risk, pooled over time steps. With log_peak the
/// peak is mapped through sign(v)*log1p(|v|) first.
struct Standardizer {
  std::array<double, kStandardizedColumns> mean{};
  std::array<double, kStandardizedColumns> scale{};
  bool log_peak = false;

  /// Raw value of `column` (including kPeakColumn) in row `r` of `w`.
  static double raw(const FeatureWindow& w, std::size_t r, std::size_t column);
  double transform(std::size_t column, double value) const;
  double apply(std::size_t column, double value) const {
    return (transform(column, value) - mean[column]) / scale[column];
  }

  static Standardizer fit(const WindowRefs& windows, bool log_peak = false, std::span<const double> weights = {});
};

struct SoftmaxConfig {
  double l2 = 1e-4;
  std::size_t max_iterations = 500;
  double tolerance = 1e-6;  // gradient max-norm
  bool log_peak = true;
  std::uint64_t seed = 0;
};

/// Number of model inputs for a window of the given length: 46 standardized
/// columns per row (45 continuous plus peak risk), the fraction of rows in
/// each of the 6 road classes, and a bias.
std::size_t softmax_input_size(std::size_t window_length);

/// Regularized multinomial log-loss over encoded windows; exposed so its
/// gradient can be checked independently.
class SoftmaxObjective {
 public:
  /// Mean log-loss weighted by `weights` (empty means all ones) plus
  /// 0.5 * l2 * |W|^2 over the non-bias weights.
  SoftmaxObjective(const WindowRefs& windows, std::span<const int> labels, const Standardizer& standardizer,
                   double l2, std::span<const double> weights = {});
  ~SoftmaxObjective();
  SoftmaxObjective(SoftmaxObjective&&) noexcept;
  SoftmaxObjective& operator=(SoftmaxObjective&&) noexcept;

  std::size_t parameter_count() const;
  /// Weights are input-major: w[input * 4 + class].
  double value_and_gradient(std::span<const double> weights, std::span<double> gradient) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class SoftmaxModel : public Model {
 public:
  SoftmaxModel(std::size_t window_length, Standardizer standardizer, std::vector<double> weights);

  std::vector<ProbabilityRow> predict_proba(const WindowRefs& windows) const override;

  std::size_t window_length() const { return window_length_; }
  const Standardizer& standardizer() const { return standardizer_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Self-describing little-endian file: magic, schema version, feature
  /// width, window length, input size, class count, flags, standardization vectors,
  /// weights.
  void save(const std::filesystem::path& path) const;
  static SoftmaxModel load(const std::filesystem::path& path);

 private:
  std::size_t window_length_;
  Standardizer standardizer_;
  std::vector<double> weights_;
};

/// Reference classifier: softmax regression fitted on the full batch with
/// L-BFGS from a seeded N(0, 0.01^2) start.
class SoftmaxClassifier : public Classifier {
 public:
  explicit SoftmaxClassifier(SoftmaxConfig config = {}) : config_(config) {}

  std::string name() const override { return "softmax"; }
  std::unique_ptr<Model> train(const WindowRefs& windows, std::span<const int> labels,
                               std::span<const double> weights = {}) override;
  SoftmaxModel fit(const WindowRefs& windows, std::span<const int> labels, std::span<const double> weights = {}) const;

  std::size_t last_iterations() const { return last_iterations_; }

 private:
  SoftmaxConfig config_;
  mutable std::size_t last_iterations_ = 0;
};

/// File-contract bridge to an out-of-process classifier.
///
/// Each predict call writes `request_<n>.json` into the work directory
/// together with the dataset directory, then runs `command <request path>`.
/// The command must write the probability CSV named in the request
/// (header `window,p1,p2,p3,p4`, one row per requested window index).
class ExternalClassifier : public Classifier {
 public:
  ExternalClassifier(std::string command, std::filesystem::path work_dir, std::uint64_t seed = 0);

  std::string name() const override { return "external"; }
  std::unique_ptr<Model> train(const WindowRefs& windows, std::span<const int> labels,
                               std::span<const double> weights = {}) override;

  /// Dataset whose windows the requests refer to. Must be set before train().
  void bind_dataset(const LabeledDataset* dataset);

 private:
  friend class ExternalModel;
  std::string command_;
  std::filesystem::path work_dir_;
  std::uint64_t seed_;
  const LabeledDataset* dataset_ = nullptr;
  std::size_t requests_ = 0;
  bool dataset_written_ = false;
};

/// Reads a probability CSV (`window,p1,p2,p3,p4`).
std::vector<std::pair<std::size_t, ProbabilityRow>> read_probability_file(const std::filesystem::path& path);
void write_probability_file(const std::filesystem::path& path, std::span<const std::size_t> windows,
                            std::span<const ProbabilityRow> probabilities);

}  // namespace dspr
