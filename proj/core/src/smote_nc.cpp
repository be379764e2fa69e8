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
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "dspr/dataset.hpp"

namespace dspr {

namespace {

bool is_continuous(std::size_t flat_index) { return flat_index % kFeatureWidth != kRoadColumn; }

double continuous_distance2(const FeatureWindow& a, const FeatureWindow& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!is_continuous(i)) continue;
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return sum;
}

std::vector<std::size_t> nearest_same_class(const std::vector<FeatureWindow>& samples,
                                            const std::vector<std::size_t>& members, std::size_t base,
                                            std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(members.size());
  for (std::size_t m : members) {
    if (m == base) continue;
    dist.emplace_back(continuous_distance2(samples[base], samples[m]), m);
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(dist[i].second);
  return out;
}

}  // namespace

FeatureWindow synthesize_window(const FeatureWindow& base, std::span<const FeatureWindow* const> neighbors,
                                std::size_t chosen, double lambda) {
  if (neighbors.empty() || chosen >= neighbors.size()) {
    throw std::invalid_argument("synthesize_window: chosen neighbour out of range");
  }
  const FeatureWindow& other = *neighbors[chosen];
  FeatureWindow out = base;
  out.synthetic = true;
  out.source.scenario_id = "smote:" + base.source.scenario_id;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (is_continuous(i)) out.values[i] = base.values[i] + lambda * (other.values[i] - base.values[i]);
  }
  for (std::size_t r = 0; r < out.rows; ++r) {
    std::map<double, std::size_t> votes;
    for (const auto* n : neighbors) ++votes[n->at(r, kRoadColumn)];
    std::size_t best = 0;
    for (const auto& [value, count] : votes) best = std::max(best, count);
    const double own = other.at(r, kRoadColumn);
    double pick = own;
    if (votes[own] != best) {
      for (const auto& [value, count] : votes) {
        if (count == best) {
          pick = value;
          break;
        }
      }
    }
    out.values[r * kFeatureWidth + kRoadColumn] = pick;
  }
  return out;
}

std::vector<FeatureWindow> smote_nc(std::vector<FeatureWindow> samples, const SmoteOptions& options) {
  if (samples.empty()) throw std::invalid_argument("smote_nc: empty sample set");
  if (options.neighbors == 0) throw std::invalid_argument("smote_nc: neighbour count must be >= 1");
  std::array<std::vector<std::size_t>, kClassCount> members;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& w = samples[i];
    if (!w.label || *w.label < 1 || *w.label > kClassCount) {
      throw std::invalid_argument("smote_nc: every sample needs a label in 1..4");
    }
    if (w.values.size() != samples.front().values.size()) {
      throw std::invalid_argument("smote_nc: windows differ in shape");
    }
    members[static_cast<std::size_t>(*w.label - 1)].push_back(i);
  }
  std::size_t target = 0;
  for (const auto& m : members) target = std::max(target, m.size());

  // Jitter scale for single-sample classes: 1% of each column's spread.
  const std::size_t width = samples.front().values.size();
  std::vector<double> spread(width, 0.0);
  {
    std::vector<double> mean(width, 0.0);
    for (const auto& w : samples) {
      for (std::size_t i = 0; i < width; ++i) mean[i] += w.values[i];
    }
    for (auto& m : mean) m /= static_cast<double>(samples.size());
    for (const auto& w : samples) {
      for (std::size_t i = 0; i < width; ++i) spread[i] += (w.values[i] - mean[i]) * (w.values[i] - mean[i]);
    }
    for (auto& s : spread) s = 0.01 * std::sqrt(s / static_cast<double>(samples.size()));
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (const auto& group : members) {
    if (group.empty() || group.size() >= target) continue;
    const std::size_t need = target - group.size();

    if (group.size() == 1) {
      for (std::size_t j = 0; j < need; ++j) {
        FeatureWindow copy = samples[group.front()];
        copy.synthetic = true;
        copy.source.scenario_id = "smote:" + copy.source.scenario_id;
        for (std::size_t i = 0; i < width; ++i) {
          if (is_continuous(i)) copy.values[i] += spread[i] * gauss(rng);
        }
        samples.push_back(std::move(copy));
      }
      continue;
    }

    const std::size_t k = std::min(options.neighbors, group.size() - 1);
    std::vector<std::size_t> order = group;
    std::shuffle(order.begin(), order.end(), rng);
    std::map<std::size_t, std::vector<std::size_t>> knn_cache;
    for (std::size_t j = 0; j < need; ++j) {
      const std::size_t base = order[j % order.size()];
      auto it = knn_cache.find(base);
      if (it == knn_cache.end()) it = knn_cache.emplace(base, nearest_same_class(samples, group, base, k)).first;
      std::vector<const FeatureWindow*> neighbors;
      for (std::size_t n : it->second) neighbors.push_back(&samples[n]);
      const std::size_t chosen = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
      const double lambda = unit(rng);
      FeatureWindow synth = synthesize_window(samples[base], neighbors, chosen, lambda);
      samples.push_back(std::move(synth));
    }
  }
  return samples;
}

void balance_true_sets(LabeledDataset& dataset, const SmoteOptions& options, bool augment_test) {
  const auto balance = [&](Partition p, std::uint64_t salt) {
    std::vector<FeatureWindow> set;
    for (const auto& w : dataset.windows) {
      if (w.partition == p) set.push_back(w);
    }
    if (set.empty()) return;
    const std::size_t before = set.size();
    SmoteOptions opt = options;
    opt.seed = options.seed ^ salt;
    auto balanced = smote_nc(std::move(set), opt);
    for (std::size_t i = before; i < balanced.size(); ++i) dataset.windows.push_back(std::move(balanced[i]));
  };
  balance(Partition::train_true, 0x7261696eULL);
  if (augment_test) balance(Partition::test_true, 0x74657374ULL);
}

}  // namespace dspr
