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

#include "dspr/study.hpp"

#include <fstream>
#include <stdexcept>

#include "dspr/parallel.hpp"
#include "json.hpp"

namespace dspr {

StudyInputs make_synthetic_inputs(const std::string& suite, std::uint64_t seed,
                                  const std::vector<RaterProfile>& profiles, const DsprParams& params,
                                  std::size_t threads) {
  StudyInputs inputs;
  inputs.scenarios = gen_suite(suite, seed);
  inputs.panels.resize(inputs.scenarios.size());
  const RiskModel model = make_dspr_model(params);
  parallel_for(inputs.scenarios.size(), threads, [&](std::size_t i) {
    const Scenario& s = inputs.scenarios[i];
    const auto results = evaluate_scenario(model, s);
    std::vector<RiskVector> series;
    series.reserve(results.size());
    for (const auto& r : results) series.push_back(r.values);
    inputs.panels[i] = simulate_raters(series, profiles, seed * 7919ULL + i, s.id);
  });
  return inputs;
}

void StudyConfig::validate() const {
  params.validate();
  thresholds.validate();
  self_train.validate();
  if (!(ttc_cap > 0.0)) throw std::invalid_argument("ttc cap must be > 0");
  if (window_length == 0) throw std::invalid_argument("window length must be >= 1");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw std::invalid_argument("split ratio must lie in (0, 1)");
  if (smote_neighbors == 0) throw std::invalid_argument("SMOTE neighbours must be >= 1");
  if (!(classifier.l2 >= 0.0)) throw std::invalid_argument("l2 must be >= 0");
  if (classifier.max_iterations == 0) throw std::invalid_argument("max iterations must be >= 1");
  if (threads == 0) throw std::invalid_argument("threads must be >= 1");
}

RatingPanel concat_panels(const std::vector<RatingPanel>& panels) {
  RatingPanel out;
  if (panels.empty()) return out;
  out.scenario_id = "suite";
  out.ratings.resize(panels.front().participants());
  for (const auto& p : panels) {
    if (p.participants() != out.ratings.size()) {
      throw ValidationError("panels disagree on participant count");
    }
    for (std::size_t r = 0; r < out.ratings.size(); ++r) {
      out.ratings[r].insert(out.ratings[r].end(), p.ratings[r].begin(), p.ratings[r].end());
    }
  }
  return out;
}

std::vector<RatingPanel> split_panel(const RatingPanel& panel, const std::vector<Scenario>& scenarios) {
  std::size_t total = 0;
  for (const auto& s : scenarios) total += s.frames.size();
  if (panel.frames() != total) {
    throw ValidationError("suite panel has " + std::to_string(panel.frames()) + " columns, suite has " +
                          std::to_string(total) + " frames");
  }
  std::vector<RatingPanel> out;
  std::size_t offset = 0;
  for (const auto& s : scenarios) {
    RatingPanel p;
    p.scenario_id = s.id;
    for (const auto& row : panel.ratings) {
      const auto first = row.begin() + static_cast<std::ptrdiff_t>(offset);
      p.ratings.emplace_back(first, first + static_cast<std::ptrdiff_t>(s.frames.size()));
    }
    offset += s.frames.size();
    out.push_back(std::move(p));
  }
  return out;
}

void save_suite(const StudyInputs& inputs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "scenarios");
  nlohmann::json index = nlohmann::json::array();
  for (const auto& s : inputs.scenarios) {
    const auto file = std::filesystem::path("scenarios") / (s.id + ".jsonl");
    save_scenario(s, dir / file);
    index.push_back({{"id", s.id}, {"file", file.string()}, {"frames", s.frames.size()}});
  }
  save_panel(concat_panels(inputs.panels), dir / "panel.csv");
  std::ofstream(dir / "suite.json") << nlohmann::json{{"scenarios", index}}.dump(2) << '\n';
}

StudyInputs load_suite(const std::filesystem::path& dir) {
  std::ifstream in(dir / "suite.json");
  if (!in) throw ParseError("cannot open " + (dir / "suite.json").string());
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("suite.json: ") + e.what());
  }
  StudyInputs inputs;
  for (const auto& entry : index.at("scenarios")) {
    inputs.scenarios.push_back(load_scenario(dir / entry.at("file").get<std::string>()));
  }
  if (std::filesystem::exists(dir / "panel.csv")) {
    const RatingPanel all = load_panel(dir / "panel.csv", "suite");
    inputs.panels = split_panel(all, inputs.scenarios);
    for (std::size_t i = 0; i < inputs.panels.size(); ++i) {
      inputs.panels[i] = validate_panel(std::move(inputs.panels[i]), inputs.scenarios[i]);
    }
  }
  return inputs;
}

namespace {

std::vector<FeatureFrame> feature_rows(const Scenario& s, const std::vector<RiskResult>& risk) {
  std::vector<FeatureFrame> rows;
  rows.reserve(s.frames.size());
  for (std::size_t f = 0; f < s.frames.size(); ++f) rows.push_back(feature_frame(s.frames[f], risk[f].values));
  return rows;
}

std::vector<double> timestamps(const Scenario& s) {
  std::vector<double> t;
  t.reserve(s.frames.size());
  for (const auto& f : s.frames) t.push_back(f.timestamp);
  return t;
}

}  // namespace

std::vector<FeatureWindow> build_windows(const StudyInputs& inputs, const RiskModel& model,
                                         std::size_t window_length, std::size_t threads) {
  std::vector<std::vector<FeatureWindow>> per(inputs.scenarios.size());
  parallel_for(per.size(), threads, [&](std::size_t i) {
    const Scenario& s = inputs.scenarios[i];
    const auto rows = feature_rows(s, evaluate_scenario(model, s));
    per[i] = feature_windows(rows, window_length, s.id, timestamps(s));
  });
  std::vector<FeatureWindow> all;
  for (auto& v : per) std::move(v.begin(), v.end(), std::back_inserter(all));
  return all;
}

LabeledDataset build_dataset(const StudyInputs& inputs, const RiskModel& model, const StudyConfig& config) {
  if (inputs.panels.size() != inputs.scenarios.size()) {
    throw ValidationError("every scenario needs a rating panel");
  }
  std::vector<std::vector<FeatureWindow>> per(inputs.scenarios.size());
  parallel_for(per.size(), config.threads, [&](std::size_t i) {
    const Scenario& s = inputs.scenarios[i];
    const RatingPanel panel = validate_panel(inputs.panels[i], s);
    const auto rows = feature_rows(s, evaluate_scenario(model, s));
    per[i] = feature_windows(rows, config.window_length, s.id, timestamps(s));
    attach_labels(per[i], consistency_filter(panel, config.thresholds), rating_counts(panel));
  });
  std::vector<FeatureWindow> all;
  for (auto& v : per) std::move(v.begin(), v.end(), std::back_inserter(all));

  LabeledDataset ds = split_dataset(std::move(all), config.split_ratio, config.seed);
  balance_true_sets(ds, {config.smote_neighbors, config.seed}, config.augment_test);
  return ds;
}

StudyResult study_on_dataset(const LabeledDataset& dataset, std::string model_name, Classifier& classifier,
                             const StudyConfig& config) {
  StudyResult result;
  result.model = std::move(model_name);
  for (const auto& w : dataset.windows) {
    if (!w.label) continue;
    const auto c = static_cast<std::size_t>(*w.label - 1);
    if (w.partition == Partition::train_true) ++result.train_true_counts[c];
    if (w.partition == Partition::test_true) ++result.test_true_counts[c];
  }
  SelfTrainResult st = self_train(dataset, classifier, config.self_train);
  if (!st.test_metrics) throw NumericError("study: true test set is empty; nothing to evaluate");
  result.self_trained = *st.test_metrics;
  result.audit = std::move(st.audit);
  result.final_model = std::shared_ptr<Model>(std::move(st.model));
  result.baseline = supervised_baseline(dataset, classifier, config.baseline);
  return result;
}

SoftmaxConfig seeded(const StudyConfig& config) {
  SoftmaxConfig cls = config.classifier;
  cls.seed = config.seed;
  return cls;
}

StudyResult run_study(const StudyInputs& inputs, const RiskModel& model, const StudyConfig& config) {
  const LabeledDataset ds = build_dataset(inputs, model, config);
  SoftmaxClassifier classifier(seeded(config));
  return study_on_dataset(ds, model.name, classifier, config);
}

std::vector<StudyResult> compare_models(const StudyInputs& inputs, const std::vector<RiskModel>& models,
                                        const StudyConfig& config) {
  std::vector<StudyResult> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(run_study(inputs, m, config));
  return out;
}

}  // namespace dspr
