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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dspr/baseline_ttc.hpp"
#include "dspr/classifier.hpp"
#include "dspr/dataset.hpp"
#include "dspr/metrics.hpp"
#include "dspr/risk_model.hpp"
#include "dspr/self_train.hpp"
#include "dspr/study.hpp"
#include "dspr/synthetic.hpp"
#include "dspr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kNumericError = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Settings shared by every subcommand. Values come from defaults, then the
// config file, then flags.
struct Pipeline {
  dspr::StudyConfig study;
  std::string model = "dspr";
  std::vector<std::string> models{"dspr", "ttc"};
  std::vector<double> thresholds{0.9, 0.75, 0.65, 0.6};
  std::string baseline = "raw";
  double noise_sd = 0.3;
  double tolerance_spread = 1.5;
  std::size_t raters = 12;
};

// Removes outputs of a failed run. Paths that existed beforehand are left alone.
class OutputGuard {
 public:
  void track(const fs::path& p) {
    if (!fs::exists(p)) created_.push_back(p);
  }
  void commit() { created_.clear(); }
  ~OutputGuard() {
    std::error_code ec;
    for (auto it = created_.rbegin(); it != created_.rend(); ++it) fs::remove_all(*it, ec);
  }

 private:
  std::vector<fs::path> created_;
};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json config_json(const Pipeline& p) {
  const auto& s = p.study;
  const auto& d = s.params;
  return json{
      {"dspr",
       {{"ego_length", d.ego_length}, {"ego_width", d.ego_width}, {"horizon", d.horizon},
        {"thw_weak", d.thw_weak}, {"thw_strong", d.thw_strong}, {"a_theta", d.a_theta},
        {"b_theta", d.b_theta}, {"c_theta", d.c_theta}, {"beta", d.beta},
        {"mass_vehicle", d.mass_vehicle}, {"mass_pedestrian", d.mass_pedestrian},
        {"min_distance", d.min_distance}, {"scan_step", d.scan_step},
        {"time_tolerance", d.time_tolerance}, {"clamp_spatial", d.clamp_spatial}}},
      {"ttc_cap", s.ttc_cap},
      {"model", p.model},
      {"models", p.models},
      {"window", s.window_length},
      {"split", s.split_ratio},
      {"thresholds", p.thresholds},
      {"smote_neighbors", s.smote_neighbors},
      {"augment_test", s.augment_test},
      {"epsilon", s.self_train.epsilon},
      {"iterations", s.self_train.iterations},
      {"baseline", p.baseline},
      {"classifier",
       {{"l2", s.classifier.l2}, {"max_iterations", s.classifier.max_iterations},
        {"tolerance", s.classifier.tolerance}, {"log_peak", s.classifier.log_peak}}},
      {"panel", {{"noise_sd", p.noise_sd}, {"tolerance_spread", p.tolerance_spread}, {"raters", p.raters}}},
  };
}

void write_manifest(const fs::path& path, const std::string& command, const Pipeline& p,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  const json config = config_json(p);
  const json hashed{{"command", command}, {"config", config}, {"seed", p.study.seed}, {"inputs", inputs}};
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(hashed.dump())));
  const json manifest{{"tool", "dspr"},
                      {"version", dspr::version()},
                      {"command", command},
                      {"config_hash", hex},
                      {"seeds", {{"seed", p.study.seed}}},
                      {"threads", p.study.threads},
                      {"config", config},
                      {"inputs", inputs},
                      {"outputs", outputs}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
}

fs::path manifest_for_file(const fs::path& file) { return fs::path(file.string() + ".manifest.json"); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void finalize(Pipeline& p) {
  if (p.thresholds.size() != dspr::kClassCount) throw ConfigError("thresholds needs exactly 4 values");
  for (std::size_t k = 0; k < dspr::kClassCount; ++k) p.study.thresholds.p_true[k] = p.thresholds[k];
  try {
    p.study.baseline = dspr::parse_baseline_mode(p.baseline);
    if (p.raters == 0) throw std::invalid_argument("raters must be >= 1");
    if (!(p.noise_sd >= 0.0)) throw std::invalid_argument("noise-sd must be >= 0");
    if (!(p.tolerance_spread >= 1.0)) throw std::invalid_argument("tolerance-spread must be >= 1");
    p.study.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

dspr::RiskModel make_model(const std::string& name, const Pipeline& p) {
  if (name == "dspr") return dspr::make_dspr_model(p.study.params);
  if (name == "ttc") return dspr::make_ttc_model(p.study.ttc_cap);
  throw ConfigError("unknown risk model '" + name + "' (dspr, ttc)");
}

std::vector<dspr::RaterProfile> panel_profiles(const Pipeline& p) {
  return dspr::default_panel(p.noise_sd, p.tolerance_spread, p.raters);
}

void rate_inputs(dspr::StudyInputs& inputs, const Pipeline& p) {
  const auto profiles = panel_profiles(p);
  const auto model = dspr::make_dspr_model(p.study.params);
  inputs.panels.clear();
  for (std::size_t i = 0; i < inputs.scenarios.size(); ++i) {
    const auto& s = inputs.scenarios[i];
    const auto results = dspr::evaluate_scenario(model, s, p.study.threads);
    std::vector<dspr::RiskVector> series;
    for (const auto& r : results) series.push_back(r.values);
    inputs.panels.push_back(dspr::simulate_raters(series, profiles, p.study.seed * 7919ULL + i, s.id));
  }
}

dspr::StudyInputs load_inputs(const fs::path& suite) {
  auto inputs = dspr::load_suite(suite);
  if (inputs.scenarios.empty()) throw dspr::ValidationError(suite.string() + ": suite has no scenarios");
  return inputs;
}

dspr::StudyInputs require_panels(const fs::path& suite) {
  auto inputs = load_inputs(suite);
  if (inputs.panels.size() != inputs.scenarios.size()) {
    throw dspr::ValidationError(suite.string() + ": suite has no rating panel");
  }
  return inputs;
}

void add_pipeline_options(CLI::App& app, Pipeline& p) {
  auto& s = p.study;
  auto& d = s.params;
  app.add_option("--threads", s.threads, "Worker threads (results do not depend on it)")->capture_default_str();
  app.add_option("--seed", s.seed, "Master seed")->capture_default_str();
  app.add_option("--model", p.model, "Risk model: dspr or ttc")->capture_default_str();
  app.add_option("--models", p.models, "Risk models for compare")->delimiter(',')->capture_default_str();
  app.add_option("--ttc-cap", s.ttc_cap, "Upper bound on 1/TTC (1/s)")->capture_default_str();
  app.add_option("--window", s.window_length, "Window length T (frames)")->capture_default_str();
  app.add_option("--split", s.split_ratio, "Fraction of clips in the training split")->capture_default_str();
  app.add_option("--thresholds", p.thresholds, "Consistency thresholds for ratings 1..4")
      ->delimiter(',')
      ->expected(4)
      ->capture_default_str();
  app.add_option("--smote-neighbors", s.smote_neighbors, "SMOTE-NC neighbours k")->capture_default_str();
  app.add_option("--augment-test", s.augment_test, "Balance the true test set with SMOTE-NC too")
      ->capture_default_str();
  app.add_option("--epsilon", s.self_train.epsilon, "Pseudo-label confidence threshold")->capture_default_str();
  app.add_option("--iterations", s.self_train.iterations, "Self-training iterations")->capture_default_str();
  app.add_option("--baseline", p.baseline, "Supervised baseline: raw, plurality or filtered")
      ->capture_default_str();
  app.add_option("--l2", s.classifier.l2, "Reference classifier L2 weight")->capture_default_str();
  app.add_option("--max-iterations", s.classifier.max_iterations, "Reference classifier optimizer iterations")
      ->capture_default_str();
  app.add_option("--tolerance", s.classifier.tolerance, "Reference classifier gradient tolerance")
      ->capture_default_str();
  app.add_option("--log-peak", s.classifier.log_peak, "log1p-transform the peak-risk input")
      ->capture_default_str();

  app.add_option("--ego-length", d.ego_length, "Ego length L (m)")->capture_default_str();
  app.add_option("--ego-width", d.ego_width, "Ego width W (m)")->capture_default_str();
  app.add_option("--horizon", d.horizon, "Perception horizon t_p (s)")->capture_default_str();
  app.add_option("--thw-weak", d.thw_weak, "Weak-domain headway (s)")->capture_default_str();
  app.add_option("--thw-strong", d.thw_strong, "Strong-domain headway (s)")->capture_default_str();
  app.add_option("--a-theta", d.a_theta, "Observation sensitivity a")->capture_default_str();
  app.add_option("--b-theta", d.b_theta, "Observation sensitivity b")->capture_default_str();
  app.add_option("--c-theta", d.c_theta, "Observation sensitivity c")->capture_default_str();
  app.add_option("--beta", d.beta, "Background energy factor")->capture_default_str();
  app.add_option("--mass-vehicle", d.mass_vehicle, "Vehicle mass term")->capture_default_str();
  app.add_option("--mass-pedestrian", d.mass_pedestrian, "Pedestrian mass term")->capture_default_str();
  app.add_option("--min-distance", d.min_distance, "Distance floor d_min (m)")->capture_default_str();
  app.add_option("--scan-step", d.scan_step, "Contact scan step (s)")->capture_default_str();
  app.add_option("--time-tolerance", d.time_tolerance, "Contact bisection tolerance (s)")->capture_default_str();
  app.add_option("--clamp-spatial", d.clamp_spatial, "Clamp spatial decay to <= 1")->capture_default_str();

  app.add_option("--noise-sd", p.noise_sd, "Synthetic rater noise")->capture_default_str();
  app.add_option("--tolerance-spread", p.tolerance_spread, "Synthetic rater tolerance spread")
      ->capture_default_str();
  app.add_option("--raters", p.raters, "Synthetic panel size")->capture_default_str();
}

json study_json(const dspr::StudyResult& r) {
  json j{{"model", r.model},
         {"self_trained", json::parse(dspr::metrics_json(r.self_trained))},
         {"baseline", json::parse(dspr::metrics_json(r.baseline))},
         {"gain", r.self_trained.accuracy - r.baseline.accuracy},
         {"train_true_counts", r.train_true_counts},
         {"test_true_counts", r.test_true_counts},
         {"pseudo_labels", r.audit.adoptions.size()},
         {"residual", r.audit.residual}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  Pipeline p;
  CLI::App app{"Perceived-risk engine and semi-supervised training pipeline"};
  app.set_version_flag("--version", std::string(dspr::version()));
  app.set_config("--config", "", "TOML-style key = value file; flags override it")->envname("DSPR_CONFIG");
  app.require_subcommand(1);
  app.fallthrough();
  add_pipeline_options(app, p);

  // gen
  std::string suite_name = "default";
  std::string kind;
  double duration = 15.0;
  std::string out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic suite (scenarios plus rating panel)");
  auto* gen_suite_opt = gen->add_option("--suite", suite_name, "Suite name")->capture_default_str();
  gen->add_option("--kind", kind, "Single scenario kind instead of a suite")->excludes(gen_suite_opt);
  gen->add_option("--duration", duration, "Duration of a single scenario (s)")->capture_default_str();
  gen->add_option("--out", out, "Output directory")->required();

  // risk
  std::string suite_dir;
  std::string scene;
  auto* risk = app.add_subcommand("risk", "Per-frame, per-slot risk dump (CSV)");
  auto* risk_suite = risk->add_option("--suite", suite_dir, "Suite directory");
  risk->add_option("--scene", scene, "Single scene file (JSON Lines)")->excludes(risk_suite);
  risk->add_option("--out", out, "Output CSV")->required();

  // features
  auto* features = app.add_subcommand("features", "Build the windowed dataset from a suite");
  features->add_option("--suite", suite_dir, "Suite directory")->required();
  features->add_option("--out", out, "Output dataset directory")->required();

  // labels
  auto* labels = app.add_subcommand("labels", "Per-frame consistency-filtered labels");
  labels->add_option("--suite", suite_dir, "Suite directory")->required();
  labels->add_option("--out", out, "Output CSV")->required();

  // train
  std::string dataset_dir;
  std::string model_path;
  auto* train = app.add_subcommand("train", "Fit the reference classifier on the true training set");
  train->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  train->add_option("--out", out, "Output model file")->required();

  // eval
  std::string partition = "test_true";
  auto* eval = app.add_subcommand("eval", "Evaluate a model file on a dataset partition");
  eval->add_option("--model-file", model_path, "Model file written by train")->required();
  eval->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  eval->add_option("--partition", partition, "Partition to score")->capture_default_str();
  eval->add_option("--out", out, "Output metrics JSON")->required();

  // selftrain
  std::string external;
  auto* selftrain = app.add_subcommand("selftrain", "Self-training plus the supervised baseline");
  auto* st_suite = selftrain->add_option("--suite", suite_dir, "Suite directory");
  selftrain->add_option("--dataset", dataset_dir, "Prepared dataset directory")->excludes(st_suite);
  selftrain->add_option("--external-classifier", external, "Command implementing the classifier file contract");
  selftrain->add_option("--out", out, "Output directory")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "Same pipeline for several risk models");
  compare->add_option("--suite", suite_dir, "Suite directory")->required();
  compare->add_option("--out", out, "Output directory")->required();

  // report
  std::string run_dir;
  auto* report = app.add_subcommand("report", "Metrics JSON and plot-ready CSVs");
  report->add_option("--run", run_dir, "Output directory of selftrain")->required();
  report->add_option("--suite", suite_dir, "Suite directory for the risk time series");
  report->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  OutputGuard guard;
  try {
    finalize(p);
    const std::string command = app.get_subcommands().front()->get_name();

    if (*gen) {
      const fs::path dir(out);
      guard.track(dir);
      dspr::StudyInputs inputs;
      if (!kind.empty()) {
        dspr::ScenarioKind k;
        try {
          k = dspr::parse_scenario_kind(kind);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
        inputs.scenarios.push_back(dspr::gen_scenario(k, duration, p.study.seed, kind));
      } else {
        try {
          inputs.scenarios = dspr::gen_suite(suite_name, p.study.seed);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
      rate_inputs(inputs, p);
      dspr::save_suite(inputs, dir);
      write_manifest(dir / "manifest.json", command, p, {}, {"scenarios/", "panel.csv", "suite.json"});
    } else if (*risk) {
      if (suite_dir.empty() && scene.empty()) throw ConfigError("risk needs --suite or --scene");
      std::vector<dspr::Scenario> scenarios;
      if (!scene.empty()) {
        scenarios.push_back(dspr::load_scenario(scene));
      } else {
        scenarios = load_inputs(suite_dir).scenarios;
      }
      const auto model = make_model(p.model, p);
      const fs::path file(out);
      guard.track(file);
      guard.track(manifest_for_file(file));
      std::ofstream csv(file);
      if (!csv) throw std::runtime_error("cannot write " + file.string());
      dspr::write_risk_dump_header(csv);
      for (const auto& s : scenarios) {
        dspr::write_risk_dump(csv, model.name, s, dspr::evaluate_scenario(model, s, p.study.threads));
      }
      csv.close();
      write_manifest(manifest_for_file(file), command, p, {suite_dir.empty() ? scene : suite_dir},
                     {file.filename().string()});
    } else if (*features) {
      auto inputs = load_inputs(suite_dir);
      const auto model = make_model(p.model, p);
      const fs::path dir(out);
      guard.track(dir);
      dspr::LabeledDataset ds;
      if (inputs.panels.size() == inputs.scenarios.size()) {
        ds = dspr::build_dataset(inputs, model, p.study);
      } else {
        ds.windows = dspr::build_windows(inputs, model, p.study.window_length, p.study.threads);
        ds.seed = p.study.seed;
      }
      dspr::save_dataset(ds, dir);
      write_manifest(dir / "manifest.json", command, p, {suite_dir}, {"windows.bin", "index.csv", "dataset.json"});
    } else if (*labels) {
      auto inputs = require_panels(suite_dir);
      const fs::path file(out);
      guard.track(file);
      guard.track(manifest_for_file(file));
      std::ostringstream csv;
      csv.precision(17);
      csv << "scenario,frame,t,label,majority,consistency,raw_label,n1,n2,n3,n4\n";
      for (std::size_t i = 0; i < inputs.scenarios.size(); ++i) {
        const auto& s = inputs.scenarios[i];
        const auto filtered = dspr::consistency_filter(inputs.panels[i], p.study.thresholds);
        const auto counts = dspr::rating_counts(inputs.panels[i]);
        for (std::size_t f = 0; f < s.frames.size(); ++f) {
          csv << s.id << ',' << f << ',' << s.frames[f].timestamp << ',';
          if (filtered[f].label) csv << *filtered[f].label;
          csv << ',' << filtered[f].majority << ',' << filtered[f].consistency << ','
              << dspr::plurality(counts[f]);
          for (auto n : counts[f]) csv << ',' << n;
          csv << '\n';
        }
      }
      write_text(file, csv.str());
      write_manifest(manifest_for_file(file), command, p, {suite_dir}, {file.filename().string()});
    } else if (*train) {
      const auto ds = dspr::load_dataset(dataset_dir);
      dspr::WindowRefs windows;
      std::vector<int> y;
      for (const auto& w : ds.windows) {
        if (w.partition == dspr::Partition::train_true && w.label) {
          windows.push_back(&w);
          y.push_back(*w.label);
        }
      }
      if (windows.empty()) throw dspr::ValidationError(dataset_dir + ": no true training windows");
      const fs::path file(out);
      guard.track(file);
      guard.track(manifest_for_file(file));
      dspr::SoftmaxClassifier classifier(dspr::seeded(p.study));
      classifier.fit(windows, y).save(file);
      write_manifest(manifest_for_file(file), command, p, {dataset_dir}, {file.filename().string()});
    } else if (*eval) {
      const auto ds = dspr::load_dataset(dataset_dir);
      dspr::Partition part;
      try {
        part = dspr::parse_partition(partition);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const auto model = dspr::SoftmaxModel::load(model_path);
      dspr::WindowRefs windows;
      std::vector<int> y;
      for (const auto& w : ds.windows) {
        const auto label = w.label ? w.label : w.raw_label;
        if (w.partition == part && label) {
          windows.push_back(&w);
          y.push_back(*label);
        }
      }
      if (windows.empty()) throw dspr::ValidationError("partition " + partition + " has no labeled windows");
      const fs::path file(out);
      guard.track(file);
      guard.track(manifest_for_file(file));
      write_text(file, dspr::metrics_json(dspr::evaluate(model, windows, y)) + "\n");
      write_manifest(manifest_for_file(file), command, p, {model_path, dataset_dir}, {file.filename().string()});
    } else if (*selftrain) {
      if (suite_dir.empty() && dataset_dir.empty()) throw ConfigError("selftrain needs --suite or --dataset");
      const fs::path dir(out);
      guard.track(dir);
      fs::create_directories(dir);
      dspr::LabeledDataset ds;
      if (!dataset_dir.empty()) {
        ds = dspr::load_dataset(dataset_dir);
      } else {
        ds = dspr::build_dataset(require_panels(suite_dir), make_model(p.model, p), p.study);
      }
      dspr::StudyResult result;
      if (!external.empty()) {
        dspr::ExternalClassifier classifier(external, dir / "external", p.study.seed);
        classifier.bind_dataset(&ds);
        result = dspr::study_on_dataset(ds, p.model, classifier, p.study);
      } else {
        dspr::SoftmaxClassifier classifier(dspr::seeded(p.study));
        result = dspr::study_on_dataset(ds, p.model, classifier, p.study);
        if (auto* softmax = dynamic_cast<const dspr::SoftmaxModel*>(result.final_model.get())) {
          softmax->save(dir / "model.bin");
        }
      }
      write_text(dir / "audit.csv", result.audit.to_csv());
      write_text(dir / "metrics.json", study_json(result).dump(2) + "\n");
      write_manifest(dir / "manifest.json", command, p, {suite_dir.empty() ? dataset_dir : suite_dir},
                     {"metrics.json", "audit.csv", "model.bin"});
    } else if (*compare) {
      const auto inputs = require_panels(suite_dir);
      std::vector<dspr::RiskModel> models;
      for (const auto& name : p.models) models.push_back(make_model(name, p));
      if (models.empty()) throw ConfigError("compare needs at least one model");
      const fs::path dir(out);
      guard.track(dir);
      fs::create_directories(dir);
      const auto results = dspr::compare_models(inputs, models, p.study);
      std::ostringstream csv;
      csv.precision(17);
      csv << "model,accuracy,precision,recall,f1,auc,baseline_accuracy\n";
      json all = json::array();
      for (const auto& r : results) {
        const auto& m = r.self_trained;
        csv << r.model << ',' << m.accuracy << ',' << m.macro_precision << ',' << m.macro_recall << ','
            << m.macro_f1 << ',';
        if (m.macro_auc) csv << *m.macro_auc;
        csv << ',' << r.baseline.accuracy << '\n';
        all.push_back(study_json(r));
      }
      write_text(dir / "compare.csv", csv.str());
      write_text(dir / "compare.json", all.dump(2) + "\n");
      write_manifest(dir / "manifest.json", command, p, {suite_dir}, {"compare.csv", "compare.json"});
    } else if (*report) {
      std::ifstream in(fs::path(run_dir) / "metrics.json");
      if (!in) throw dspr::ParseError("cannot open " + (fs::path(run_dir) / "metrics.json").string());
      json run;
      try {
        run = json::parse(in);
      } catch (const json::exception& e) {
        throw dspr::ParseError(std::string("metrics.json: ") + e.what());
      }
      const fs::path dir(out);
      guard.track(dir);
      fs::create_directories(dir);

      const auto& st = run.at("self_trained");
      json table{{"model", run.value("model", p.model)},
                 {"accuracy", st.at("accuracy")},
                 {"precision", st.at("precision")},
                 {"recall", st.at("recall")},
                 {"f1", st.at("f1")},
                 {"auc", st.at("auc")},
                 {"baseline_accuracy", run.at("baseline").at("accuracy")},
                 {"gain", run.at("gain")}};
      write_text(dir / "metrics.json", table.dump(2) + "\n");

      std::ostringstream confusion;
      confusion << "truth,predicted,count\n";
      const auto& cm = st.at("confusion");
      for (std::size_t t = 0; t < cm.size(); ++t) {
        for (std::size_t q = 0; q < cm[t].size(); ++q) {
          confusion << t + 1 << ',' << q + 1 << ',' << cm[t][q].get<std::size_t>() << '\n';
        }
      }
      write_text(dir / "confusion.csv", confusion.str());

      std::ifstream audit(fs::path(run_dir) / "audit.csv");
      if (!audit) throw dspr::ParseError("cannot open " + (fs::path(run_dir) / "audit.csv").string());
      std::ostringstream adoption;
      std::string line;
      while (std::getline(audit, line) && !line.empty() && line[0] != '#') adoption << line << '\n';
      write_text(dir / "adoption.csv", adoption.str());

      std::vector<std::string> outputs{"metrics.json", "confusion.csv", "adoption.csv"};
      if (!suite_dir.empty()) {
        const auto inputs = load_inputs(suite_dir);
        const auto model = make_model(p.model, p);
        std::ostringstream series;
        series.precision(17);
        series << "scenario,frame,t,aggregate_risk,triggered_slots\n";
        for (const auto& s : inputs.scenarios) {
          const auto results = dspr::evaluate_scenario(model, s, p.study.threads);
          for (std::size_t f = 0; f < results.size(); ++f) {
            std::size_t triggered = 0;
            for (const auto& b : results[f].breakdowns) triggered += b.triggered ? 1 : 0;
            series << s.id << ',' << f << ',' << s.frames[f].timestamp << ','
                   << dspr::aggregate_risk(results[f].values) << ',' << triggered << '\n';
          }
        }
        write_text(dir / "risk_timeseries.csv", series.str());
        outputs.push_back("risk_timeseries.csv");
      }
      write_manifest(dir / "manifest.json", command, p, {run_dir, suite_dir}, outputs);
    }
    guard.commit();
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "dspr: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const dspr::NumericError& e) {
    std::cerr << "dspr: numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dspr: invalid setting: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "dspr: data error: " << e.what() << '\n';
    return kDataError;
  }
}
