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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "dspr/dataset.hpp"

namespace dspr {

FeatureFrame feature_frame(const Frame& frame, const RiskVector& risk) {
  FeatureFrame row{};
  row[0] = frame.ego.velocity.x;
  row[1] = frame.ego.velocity.y;
  row[2] = frame.ego.acceleration.x;
  row[3] = frame.ego.acceleration.y;
  row[4] = frame.ego.heading;
  row[kRoadColumn] = static_cast<double>(frame.road_condition);
  std::copy(risk.begin(), risk.end(), row.begin() + kRiskColumn);
  return row;
}

const char* to_string(Provenance p) { return p == Provenance::true_label ? "true" : "pseudo"; }

const char* to_string(Partition p) {
  switch (p) {
    case Partition::train_true: return "train_true";
    case Partition::train_unlabeled: return "train_unlabeled";
    case Partition::test_true: return "test_true";
    case Partition::test_unlabeled: return "test_unlabeled";
    case Partition::none: break;
  }
  return "none";
}

Provenance parse_provenance(const std::string& text) {
  if (text == "true") return Provenance::true_label;
  if (text == "pseudo") return Provenance::pseudo_label;
  throw ParseError("unknown provenance '" + text + "'");
}

Partition parse_partition(const std::string& text) {
  for (auto p : {Partition::none, Partition::train_true, Partition::train_unlabeled, Partition::test_true,
                 Partition::test_unlabeled}) {
    if (text == to_string(p)) return p;
  }
  throw ParseError("unknown partition '" + text + "'");
}

std::vector<FeatureWindow> feature_windows(std::span<const FeatureFrame> frames, std::size_t window_length,
                                           const std::string& scenario_id, std::span<const double> timestamps) {
  if (window_length == 0) throw std::invalid_argument("feature_windows: window length must be >= 1");
  if (timestamps.size() != frames.size()) {
    throw std::invalid_argument("feature_windows: timestamp count does not match frame count");
  }
  std::vector<FeatureWindow> out;
  if (frames.size() < window_length) return out;
  out.reserve(frames.size() - window_length + 1);
  for (std::size_t end = window_length - 1; end < frames.size(); ++end) {
    FeatureWindow w;
    w.rows = window_length;
    w.values.reserve(window_length * kFeatureWidth);
    for (std::size_t f = end + 1 - window_length; f <= end; ++f) {
      w.values.insert(w.values.end(), frames[f].begin(), frames[f].end());
    }
    w.source = {scenario_id, timestamps[end], end};
    out.push_back(std::move(w));
  }
  return out;
}

void ClassThresholds::validate() const {
  for (double p : p_true) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("class threshold must lie in (0, 1]");
  }
}

namespace {

std::array<std::size_t, kClassCount> column_counts(const RatingPanel& panel, std::size_t column) {
  std::array<std::size_t, kClassCount> counts{};
  for (const auto& row : panel.ratings) {
    const int r = row[column];
    if (r < 1 || r > kClassCount) {
      throw std::invalid_argument("rating " + std::to_string(r) + " outside 1..4; validate the panel first");
    }
    ++counts[static_cast<std::size_t>(r - 1)];
  }
  return counts;
}

}  // namespace

std::vector<FrameLabel> consistency_filter(const RatingPanel& panel, const ClassThresholds& thresholds) {
  if (panel.participants() == 0) throw std::invalid_argument("consistency_filter: panel has no participants");
  thresholds.validate();
  const double n = static_cast<double>(panel.participants());
  std::vector<FrameLabel> out(panel.frames());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const auto counts = column_counts(panel, t);
    const auto top = std::max_element(counts.begin(), counts.end());
    const auto ties = std::count(counts.begin(), counts.end(), *top);
    FrameLabel& fl = out[t];
    fl.consistency = static_cast<double>(*top) / n;
    if (ties > 1) continue;
    fl.majority = static_cast<int>(top - counts.begin()) + 1;
    if (fl.consistency >= thresholds[fl.majority]) fl.label = fl.majority;
  }
  return out;
}

std::vector<RatingCounts> rating_counts(const RatingPanel& panel) {
  std::vector<RatingCounts> out(panel.frames());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const auto counts = column_counts(panel, t);
    for (std::size_t k = 0; k < kClassCount; ++k) out[t][k] = static_cast<std::uint16_t>(counts[k]);
  }
  return out;
}

int plurality(const RatingCounts& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin()) + 1;
}

std::vector<int> raw_labels(const RatingPanel& panel) {
  const auto counts = rating_counts(panel);
  std::vector<int> out(counts.size());
  std::transform(counts.begin(), counts.end(), out.begin(), plurality);
  return out;
}

void attach_labels(std::span<FeatureWindow> windows, std::span<const FrameLabel> filtered,
                   std::span<const RatingCounts> ratings) {
  for (auto& w : windows) {
    const std::size_t f = w.source.end_frame;
    if (f >= filtered.size() || f >= ratings.size()) {
      throw std::invalid_argument("attach_labels: window ends past the rated frames");
    }
    w.label = filtered[f].label;
    w.ratings = ratings[f];
    w.raw_label = plurality(ratings[f]);
    w.provenance = Provenance::true_label;
  }
}

std::vector<std::size_t> LabeledDataset::indices(Partition p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].partition == p) out.push_back(i);
  }
  return out;
}

LabeledDataset split_dataset(std::vector<FeatureWindow> windows, double split_ratio, std::uint64_t seed) {
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw std::invalid_argument("split_dataset: ratio must lie in (0, 1)");
  }
  std::vector<std::string> clips;
  for (const auto& w : windows) {
    if (std::find(clips.begin(), clips.end(), w.source.scenario_id) == clips.end()) {
      clips.push_back(w.source.scenario_id);
    }
  }
  if (clips.size() < 2) throw std::invalid_argument("split_dataset: need at least two scenarios");

  std::mt19937_64 rng(seed);
  std::shuffle(clips.begin(), clips.end(), rng);
  const auto n = static_cast<double>(clips.size());
  const auto n_train = static_cast<std::size_t>(std::clamp(std::round(split_ratio * n), 1.0, n - 1.0));

  LabeledDataset ds;
  ds.split_ratio = split_ratio;
  ds.seed = seed;
  ds.train_scenarios.assign(clips.begin(), clips.begin() + static_cast<std::ptrdiff_t>(n_train));
  ds.test_scenarios.assign(clips.begin() + static_cast<std::ptrdiff_t>(n_train), clips.end());
  std::sort(ds.train_scenarios.begin(), ds.train_scenarios.end());
  std::sort(ds.test_scenarios.begin(), ds.test_scenarios.end());

  for (auto& w : windows) {
    const bool train = std::binary_search(ds.train_scenarios.begin(), ds.train_scenarios.end(),
                                          w.source.scenario_id);
    if (train) {
      w.partition = w.label ? Partition::train_true : Partition::train_unlabeled;
    } else {
      w.partition = w.label ? Partition::test_true : Partition::test_unlabeled;
    }
  }
  ds.windows = std::move(windows);
  return ds;
}

std::array<std::size_t, kClassCount> class_counts(std::span<const FeatureWindow> windows) {
  std::array<std::size_t, kClassCount> counts{};
  for (const auto& w : windows) {
    if (w.label) ++counts.at(static_cast<std::size_t>(*w.label - 1));
  }
  return counts;
}

}  // namespace dspr
