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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dspr/dspr_model.hpp"
#include "dspr/scene.hpp"

namespace dspr {

inline constexpr std::size_t kFeatureWidth = 46;
inline constexpr std::size_t kRoadColumn = 5;  // categorical road class inside a feature row
inline constexpr std::size_t kRiskColumn = 6;
inline constexpr std::size_t kDefaultWindowLength = 10;
inline constexpr int kClassCount = 4;

/// [v_x, v_y, a_x, a_y, heading, road class, R_0 .. R_39]
using FeatureFrame = std::array<double, kFeatureWidth>;

FeatureFrame feature_frame(const Frame& frame, const RiskVector& risk);

enum class Provenance { true_label, pseudo_label };
enum class Partition { none, train_true, train_unlabeled, test_true, test_unlabeled };

const char* to_string(Provenance p);
const char* to_string(Partition p);
Provenance parse_provenance(const std::string& text);
Partition parse_partition(const std::string& text);

struct WindowSource {
  std::string scenario_id;
  double end_timestamp = 0.0;
  std::size_t end_frame = 0;
};

/// How many raters gave each rating (1..4) to one frame.
using RatingCounts = std::array<std::uint16_t, kClassCount>;

/// T consecutive feature rows of one scenario, row-major.
struct FeatureWindow {
  std::size_t rows = 0;
  std::vector<double> values;
  std::optional<int> label;      // consistency-filtered label, 1..4
  std::optional<int> raw_label;  // plurality vote, 1..4
  RatingCounts ratings{};        // individual ratings of the end frame
  Provenance provenance = Provenance::true_label;
  Partition partition = Partition::none;
  bool synthetic = false;
  WindowSource source;

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * kFeatureWidth, kFeatureWidth);
  }
  double at(std::size_t r, std::size_t c) const { return values[r * kFeatureWidth + c]; }
};

/// Sliding windows ending at frames T-1 .. last. Fewer than T frames yields
/// an empty list. Throws std::invalid_argument if T == 0 or the timestamp
/// count does not match.
std::vector<FeatureWindow> feature_windows(std::span<const FeatureFrame> frames, std::size_t window_length,
                                           const std::string& scenario_id, std::span<const double> timestamps);

/// Per-class minimum consistency ratio for a rating to count as a true label.
struct ClassThresholds {
  std::array<double, kClassCount> p_true{0.9, 0.75, 0.65, 0.6};

  double operator[](int label) const { return p_true.at(static_cast<std::size_t>(label - 1)); }
  void validate() const;
};

struct FrameLabel {
  std::optional<int> label;  // set iff the frame passes the filter
  int majority = 0;          // argmax rating, 0 on a tie
  double consistency = 0.0;  // max_r N_r / N
};

/// Per-frame consistency ratio filter. Ties in the argmax leave the frame
/// unlabeled. Expects a validated panel (ratings in 1..4).
std::vector<FrameLabel> consistency_filter(const RatingPanel& panel, const ClassThresholds& thresholds);

/// Rating histogram per frame. Expects a validated panel.
std::vector<RatingCounts> rating_counts(const RatingPanel& panel);

/// Plurality rating per frame without filtering; ties go to the lower rating.
std::vector<int> raw_labels(const RatingPanel& panel);
int plurality(const RatingCounts& counts);

/// Assigns label, ratings and raw_label (their plurality) at each window end.
void attach_labels(std::span<FeatureWindow> windows, std::span<const FrameLabel> filtered,
                   std::span<const RatingCounts> ratings);

struct LabeledDataset {
  std::vector<FeatureWindow> windows;
  double split_ratio = 0.7;
  std::uint64_t seed = 0;
  std::vector<std::string> train_scenarios;
  std::vector<std::string> test_scenarios;

  std::vector<std::size_t> indices(Partition p) const;
};

/// Seeded split at scenario granularity; round(s * clips) clips go to train
/// (at least one clip on each side). Windows are then placed in the true or
/// unlabeled partition by whether they carry a filtered label.
LabeledDataset split_dataset(std::vector<FeatureWindow> windows, double split_ratio, std::uint64_t seed);

struct SmoteOptions {
  std::size_t neighbors = 5;
  std::uint64_t seed = 0;
};

/// SMOTE-NC over a labeled window set: every class present is raised to the
/// majority count. Continuous features are interpolated toward one of the k
/// nearest same-class neighbours; the road class of each row takes the mode
/// of the k neighbours. Classes with one sample are duplicated with jitter.
/// Throws std::invalid_argument on an empty set or an unlabeled window.
std::vector<FeatureWindow> smote_nc(std::vector<FeatureWindow> samples, const SmoteOptions& options);

/// One SMOTE-NC sample: continuous features at base + lambda * (chosen -
/// base); each row's road class is the mode over `neighbors` (ties go to the
/// chosen neighbour's value when it is among the tied, else the smallest).
FeatureWindow synthesize_window(const FeatureWindow& base, std::span<const FeatureWindow* const> neighbors,
                                std::size_t chosen, double lambda);

/// Balances the train true partition (and the test true partition when
/// `augment_test` is set) in place.
void balance_true_sets(LabeledDataset& dataset, const SmoteOptions& options, bool augment_test);

std::array<std::size_t, kClassCount> class_counts(std::span<const FeatureWindow> windows);

/// Dataset directory: windows.bin (little-endian uint32 count, T, width, then
/// float32 values) and index.csv.
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& dir);
LabeledDataset load_dataset(const std::filesystem::path& dir);

}  // namespace dspr
