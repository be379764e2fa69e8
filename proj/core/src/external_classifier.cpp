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

#include <cstdlib>
#include <fstream>
#include <map>

#include "dspr/classifier.hpp"
#include "json.hpp"

namespace dspr {

class ExternalModel : public Model {
 public:
  ExternalModel(ExternalClassifier& owner, std::vector<std::size_t> train_windows, std::vector<int> train_labels,
                std::vector<double> train_weights)
      : owner_(owner),
        train_windows_(std::move(train_windows)),
        train_labels_(std::move(train_labels)),
        train_weights_(std::move(train_weights)) {}

  std::vector<ProbabilityRow> predict_proba(const WindowRefs& windows) const override {
    const LabeledDataset& ds = *owner_.dataset_;
    std::vector<std::size_t> indices;
    indices.reserve(windows.size());
    std::map<Partition, std::size_t> partitions;
    for (const auto* w : windows) {
      const auto offset = w - ds.windows.data();
      if (offset < 0 || static_cast<std::size_t>(offset) >= ds.windows.size()) {
        throw std::invalid_argument("external classifier: window is not part of the bound dataset");
      }
      indices.push_back(static_cast<std::size_t>(offset));
      ++partitions[w->partition];
    }

    const std::size_t n = owner_.requests_++;
    const auto request = owner_.work_dir_ / ("request_" + std::to_string(n) + ".json");
    const auto output = owner_.work_dir_ / ("probabilities_" + std::to_string(n) + ".csv");
    std::filesystem::remove(output);

    nlohmann::json train = nlohmann::json::array();
    for (std::size_t i = 0; i < train_windows_.size(); ++i) {
      train.push_back({{"window", train_windows_[i]},
                       {"label", train_labels_[i]},
                       {"weight", train_weights_.empty() ? 1.0 : train_weights_[i]}});
    }
    nlohmann::json manifest{
        {"schema", 1},
        {"dataset_dir", (owner_.work_dir_ / "dataset").string()},
        {"split", partitions.size() == 1 ? to_string(partitions.begin()->first) : "mixed"},
        {"train", std::move(train)},
        {"predict", indices},
        {"output", output.string()},
        {"seed", owner_.seed_},
        {"classes", kClassCount},
    };
    std::ofstream(request) << manifest.dump(2) << '\n';

    const std::string cmd = owner_.command_ + " \"" + request.string() + "\"";
    const int status = std::system(cmd.c_str());
    if (status != 0) {
      throw std::runtime_error("external classifier exited with status " + std::to_string(status));
    }

    const auto rows = read_probability_file(output);
    std::map<std::size_t, ProbabilityRow> by_window(rows.begin(), rows.end());
    std::vector<ProbabilityRow> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
      const auto it = by_window.find(idx);
      if (it == by_window.end()) {
        throw ParseError(output.string() + ": no probabilities for window " + std::to_string(idx));
      }
      out.push_back(it->second);
    }
    return out;
  }

 private:
  ExternalClassifier& owner_;
  std::vector<std::size_t> train_windows_;
  std::vector<int> train_labels_;
  std::vector<double> train_weights_;
};

ExternalClassifier::ExternalClassifier(std::string command, std::filesystem::path work_dir, std::uint64_t seed)
    : command_(std::move(command)), work_dir_(std::move(work_dir)), seed_(seed) {}

void ExternalClassifier::bind_dataset(const LabeledDataset* dataset) {
  dataset_ = dataset;
  dataset_written_ = false;
}

std::unique_ptr<Model> ExternalClassifier::train(const WindowRefs& windows, std::span<const int> labels,
                                                 std::span<const double> weights) {
  if (dataset_ == nullptr) throw std::logic_error("external classifier: no dataset bound");
  if (windows.empty()) throw std::invalid_argument("external classifier: empty training set");
  if (labels.size() != windows.size() || (!weights.empty() && weights.size() != windows.size())) {
    throw std::invalid_argument("external classifier: label or weight count mismatch");
  }
  if (!dataset_written_) {
    std::filesystem::create_directories(work_dir_);
    save_dataset(*dataset_, work_dir_ / "dataset");
    dataset_written_ = true;
  }
  std::vector<std::size_t> indices;
  for (const auto* w : windows) {
    const auto offset = w - dataset_->windows.data();
    if (offset < 0 || static_cast<std::size_t>(offset) >= dataset_->windows.size()) {
      throw std::invalid_argument("external classifier: window is not part of the bound dataset");
    }
    indices.push_back(static_cast<std::size_t>(offset));
  }
  return std::make_unique<ExternalModel>(*this, std::move(indices), std::vector<int>(labels.begin(), labels.end()),
                                         std::vector<double>(weights.begin(), weights.end()));
}

}  // namespace dspr
