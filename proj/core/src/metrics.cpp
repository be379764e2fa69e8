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

#include "dspr/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace dspr {

Metrics metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion) {
  const std::size_t k = confusion.size();
  for (const auto& row : confusion) {
    if (row.size() != k) throw std::invalid_argument("confusion matrix must be square");
  }
  Metrics m;
  m.confusion = confusion;
  std::size_t correct = 0;
  std::vector<std::size_t> predicted(k, 0);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t p = 0; p < k; ++p) {
      m.total += confusion[t][p];
      predicted[p] += confusion[t][p];
    }
    correct += confusion[t][t];
  }
  if (m.total == 0) throw std::invalid_argument("metrics: empty evaluation set");
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.total);

  std::size_t present = 0;
  for (std::size_t c = 0; c < k; ++c) {
    ClassMetrics cm;
    cm.label = static_cast<int>(c) + 1;
    cm.support = std::accumulate(confusion[c].begin(), confusion[c].end(), std::size_t{0});
    const double tp = static_cast<double>(confusion[c][c]);
    cm.precision = predicted[c] ? tp / static_cast<double>(predicted[c]) : 0.0;
    cm.recall = cm.support ? tp / static_cast<double>(cm.support) : 0.0;
    cm.f1 = cm.precision + cm.recall > 0.0 ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall) : 0.0;
    if (cm.support > 0) {
      ++present;
      m.macro_precision += cm.precision;
      m.macro_recall += cm.recall;
      m.macro_f1 += cm.f1;
    }
    m.per_class.push_back(cm);
  }
  m.macro_precision /= static_cast<double>(present);
  m.macro_recall /= static_cast<double>(present);
  m.macro_f1 /= static_cast<double>(present);
  return m;
}

std::optional<double> binary_auc(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t q = i; q <= j; ++q) {
      if (positive[order[q]]) {
        rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j + 1;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

Metrics compute_metrics(std::span<const int> truth, std::span<const ProbabilityRow> probabilities) {
  if (truth.empty()) throw std::invalid_argument("metrics: empty evaluation set");
  if (truth.size() != probabilities.size()) throw std::invalid_argument("metrics: size mismatch");
  std::vector<std::vector<std::size_t>> confusion(kClassCount, std::vector<std::size_t>(kClassCount, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 1 || truth[i] > kClassCount) throw std::invalid_argument("metrics: label outside 1..4");
    ++confusion[static_cast<std::size_t>(truth[i] - 1)][static_cast<std::size_t>(predicted_label(probabilities[i]) - 1)];
  }
  Metrics m = metrics_from_confusion(confusion);

  double auc_sum = 0.0;
  std::size_t auc_count = 0;
  std::vector<double> scores(truth.size());
  std::vector<std::uint8_t> positive(truth.size());
  for (std::size_t c = 0; c < kClassCount; ++c) {
    for (std::size_t i = 0; i < truth.size(); ++i) {
      scores[i] = probabilities[i][c];
      positive[i] = truth[i] == static_cast<int>(c) + 1;
    }
    const auto auc = binary_auc(scores, positive);
    m.per_class[c].auc = auc;
    if (auc) {
      auc_sum += *auc;
      ++auc_count;
    } else {
      m.omitted_auc_classes.push_back(static_cast<int>(c) + 1);
    }
  }
  if (auc_count) m.macro_auc = auc_sum / static_cast<double>(auc_count);
  return m;
}

Metrics evaluate(const Model& model, const WindowRefs& windows, std::span<const int> labels) {
  if (windows.empty()) throw std::invalid_argument("evaluate: empty test set");
  const auto probs = predict_checked(model, windows);
  return compute_metrics(labels, probs);
}

std::string metrics_json(const Metrics& m, int indent) {
  using nlohmann::json;
  json per_class = json::array();
  for (const auto& c : m.per_class) {
    json jc{{"label", c.label}, {"support", c.support}, {"precision", c.precision}, {"recall", c.recall},
            {"f1", c.f1}};
    jc["auc"] = c.auc ? json(*c.auc) : json(nullptr);
    per_class.push_back(std::move(jc));
  }
  json j{{"total", m.total},
         {"accuracy", m.accuracy},
         {"precision", m.macro_precision},
         {"recall", m.macro_recall},
         {"f1", m.macro_f1},
         {"auc", m.macro_auc ? json(*m.macro_auc) : json(nullptr)},
         {"auc_omitted_classes", m.omitted_auc_classes},
         {"confusion", m.confusion},
         {"per_class", std::move(per_class)}};
  return j.dump(indent);
}

}  // namespace dspr
