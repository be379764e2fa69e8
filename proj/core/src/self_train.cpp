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

#include "dspr/self_train.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dspr {

void SelfTrainConfig::validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("self-train epsilon must be >= 0");
}

std::string AuditLog::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,training_size,candidates,adopted,pseudo_total,adopted_1,adopted_2,adopted_3,adopted_4\n";
  for (const auto& e : entries) {
    out << e.iteration << ',' << e.training_size << ',' << e.candidates << ',' << e.adopted << ','
        << e.pseudo_total;
    for (auto c : e.adopted_by_class) out << ',' << c;
    out << '\n';
  }
  out << "# residual=" << residual << " final_training_size=" << final_training_size << '\n';
  out << "window,label,iteration,confidence\n";
  for (const auto& a : adoptions) {
    out << a.window << ',' << a.label << ',' << a.iteration << ',' << a.confidence << '\n';
  }
  return out.str();
}

namespace {

struct TrainingSet {
  WindowRefs windows;
  std::vector<int> labels;
};

TrainingSet true_train(const LabeledDataset& ds) {
  TrainingSet set;
  for (const auto& w : ds.windows) {
    if (w.partition == Partition::train_true) {
      set.windows.push_back(&w);
      set.labels.push_back(*w.label);
    }
  }
  return set;
}

}  // namespace

SelfTrainResult self_train(const LabeledDataset& dataset, Classifier& classifier, const SelfTrainConfig& config) {
  config.validate();
  const TrainingSet truth = true_train(dataset);
  if (truth.windows.empty()) throw std::invalid_argument("self_train: true training set is empty");

  std::vector<std::size_t> unlabeled = dataset.indices(Partition::train_unlabeled);
  std::vector<Adoption> pseudo;
  SelfTrainResult result;

  const auto current_set = [&] {
    TrainingSet set = truth;
    for (const auto& a : pseudo) {
      set.windows.push_back(&dataset.windows[a.window]);
      set.labels.push_back(a.label);
    }
    return set;
  };

  std::vector<ProbabilityRow> last_probs;
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    const TrainingSet set = current_set();
    const auto model = classifier.train(set.windows, set.labels);

    AuditEntry entry;
    entry.iteration = it;
    entry.training_size = set.windows.size();
    entry.candidates = unlabeled.size();

    last_probs.clear();
    if (!unlabeled.empty()) last_probs = predict_checked(*model, window_refs(dataset.windows, unlabeled));

    std::vector<std::size_t> keep;
    std::vector<ProbabilityRow> keep_probs;
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
      const ProbabilityRow& p = last_probs[i];
      const int label = predicted_label(p);
      const double confidence = p[static_cast<std::size_t>(label - 1)];
      if (confidence > config.epsilon) {
        pseudo.push_back({unlabeled[i], label, it, confidence});
        ++entry.adopted;
        ++entry.adopted_by_class[static_cast<std::size_t>(label - 1)];
      } else {
        keep.push_back(unlabeled[i]);
        keep_probs.push_back(p);
      }
    }
    unlabeled = std::move(keep);
    last_probs = std::move(keep_probs);
    entry.pseudo_total = pseudo.size();
    result.audit.entries.push_back(entry);
  }

  result.audit.residual = unlabeled.size();
  if (!config.discard_residual) {
    // Residual windows never predicted (zero iterations) have no label to take.
    for (std::size_t i = 0; i < unlabeled.size() && i < last_probs.size(); ++i) {
      const int label = predicted_label(last_probs[i]);
      pseudo.push_back({unlabeled[i], label, config.iterations + 1, last_probs[i][static_cast<std::size_t>(label - 1)]});
    }
  }
  result.audit.adoptions = pseudo;

  const TrainingSet final_set = current_set();
  result.audit.final_training_size = final_set.windows.size();
  result.model = classifier.train(final_set.windows, final_set.labels);

  const auto test = dataset.indices(Partition::test_true);
  if (!test.empty()) {
    std::vector<int> labels;
    for (std::size_t i : test) labels.push_back(*dataset.windows[i].label);
    result.test_metrics = evaluate(*result.model, window_refs(dataset.windows, test), labels);
  }
  return result;
}

const char* to_string(BaselineMode mode) {
  switch (mode) {
    case BaselineMode::raw: return "raw";
    case BaselineMode::plurality: return "plurality";
    case BaselineMode::filtered: break;
  }
  return "filtered";
}

BaselineMode parse_baseline_mode(const std::string& text) {
  if (text == "raw") return BaselineMode::raw;
  if (text == "plurality") return BaselineMode::plurality;
  if (text == "filtered") return BaselineMode::filtered;
  throw std::invalid_argument("unknown baseline mode '" + text + "' (raw, plurality, filtered)");
}

Metrics supervised_baseline(const LabeledDataset& dataset, Classifier& classifier, BaselineMode mode) {
  TrainingSet train;
  std::vector<double> weights;
  WindowRefs test;
  for (const auto& w : dataset.windows) {
    const bool is_train = w.partition == Partition::train_true || w.partition == Partition::train_unlabeled;
    const bool is_test = w.partition == Partition::test_true || w.partition == Partition::test_unlabeled;
    if (is_train) {
      if (mode == BaselineMode::filtered) {
        if (w.partition != Partition::train_true) continue;
        train.windows.push_back(&w);
        train.labels.push_back(*w.label);
      } else if (!w.synthetic && w.raw_label) {
        if (mode == BaselineMode::plurality) {
          train.windows.push_back(&w);
          train.labels.push_back(*w.raw_label);
          continue;
        }
        for (std::size_t k = 0; k < kClassCount; ++k) {
          if (w.ratings[k] == 0) continue;
          train.windows.push_back(&w);
          train.labels.push_back(static_cast<int>(k) + 1);
          weights.push_back(static_cast<double>(w.ratings[k]));
        }
      }
    } else if (is_test && !w.synthetic && w.raw_label) {
      test.push_back(&w);
    }
  }
  if (train.windows.empty()) throw std::invalid_argument("supervised_baseline: empty training set");
  if (test.empty()) throw std::invalid_argument("supervised_baseline: empty test set");
  const auto model = classifier.train(train.windows, train.labels, weights);
  const auto probs = predict_checked(*model, test);

  std::vector<int> truth;
  std::vector<ProbabilityRow> rows;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (mode != BaselineMode::raw) {
      truth.push_back(*test[i]->raw_label);
      rows.push_back(probs[i]);
      continue;
    }
    for (std::size_t k = 0; k < kClassCount; ++k) {
      truth.insert(truth.end(), test[i]->ratings[k], static_cast<int>(k) + 1);
      rows.insert(rows.end(), test[i]->ratings[k], probs[i]);
    }
  }
  if (truth.empty()) throw std::invalid_argument("supervised_baseline: test windows carry no ratings");
  return compute_metrics(truth, rows);
}

}  // namespace dspr
