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

#include <Eigen/Dense>
#include <ceres/ceres.h>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "dspr/classifier.hpp"

namespace dspr {

namespace {

constexpr std::size_t kRoadClasses = 6;
constexpr std::size_t kEncodedRowWidth = kStandardizedColumns - 1;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd encode(const WindowRefs& windows, const Standardizer& s, std::size_t window_length) {
  const std::size_t inputs = softmax_input_size(window_length);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(windows.size()),
                                            static_cast<Eigen::Index>(inputs));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const FeatureWindow& w = *windows[i];
    if (w.rows != window_length || w.values.size() != window_length * kFeatureWidth) {
      throw std::invalid_argument("softmax: window shape does not match the model");
    }
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t r = 0; r < window_length; ++r) {
      std::size_t col = r * kEncodedRowWidth;
      for (std::size_t c = 0; c < kStandardizedColumns; ++c) {
        if (c == kRoadColumn) continue;
        x(row, static_cast<Eigen::Index>(col++)) = s.apply(c, Standardizer::raw(w, r, c));
      }
      const long road = std::clamp(std::lround(w.at(r, kRoadColumn)), 1L, static_cast<long>(kRoadClasses));
      const std::size_t slot = window_length * kEncodedRowWidth + static_cast<std::size_t>(road - 1);
      x(row, static_cast<Eigen::Index>(slot)) += 1.0 / static_cast<double>(window_length);
    }
    x(row, static_cast<Eigen::Index>(inputs - 1)) = 1.0;
  }
  return x;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

class LossFunction final : public ceres::FirstOrderFunction {
 public:
  explicit LossFunction(const SoftmaxObjective& objective) : objective_(objective) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const std::size_t n = objective_.parameter_count();
    scratch_.resize(n);
    *cost = objective_.value_and_gradient({parameters, n}, scratch_);
    if (gradient != nullptr) std::copy(scratch_.begin(), scratch_.end(), gradient);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return static_cast<int>(objective_.parameter_count()); }

 private:
  const SoftmaxObjective& objective_;
  mutable std::vector<double> scratch_;
};

}  // namespace

std::size_t softmax_input_size(std::size_t window_length) {
  return window_length * kEncodedRowWidth + kRoadClasses + 1;
}

struct SoftmaxObjective::Impl {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::VectorXd weight;  // normalized to sum 1
  double l2 = 0.0;
};

SoftmaxObjective::SoftmaxObjective(const WindowRefs& windows, std::span<const int> labels,
                                   const Standardizer& standardizer, double l2, std::span<const double> weights)
    : impl_(std::make_unique<Impl>()) {
  if (windows.empty()) throw std::invalid_argument("softmax: empty training set");
  if (labels.size() != windows.size()) throw std::invalid_argument("softmax: label count mismatch");
  if (!weights.empty() && weights.size() != windows.size()) throw std::invalid_argument("softmax: weight count mismatch");
  impl_->weight = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(windows.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("softmax: bad sample weight");
    impl_->weight(static_cast<Eigen::Index>(i)) = weights[i];
  }
  const double total = impl_->weight.sum();
  if (!(total > 0.0)) throw std::invalid_argument("softmax: sample weights sum to zero");
  impl_->weight /= total;
  impl_->x = encode(windows, standardizer, windows.front()->rows);
  impl_->y = Eigen::MatrixXd::Zero(impl_->x.rows(), kClassCount);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > kClassCount) throw std::invalid_argument("softmax: label outside 1..4");
    impl_->y(static_cast<Eigen::Index>(i), labels[i] - 1) = 1.0;
  }
  impl_->l2 = l2;
}

SoftmaxObjective::~SoftmaxObjective() = default;
SoftmaxObjective::SoftmaxObjective(SoftmaxObjective&&) noexcept = default;
SoftmaxObjective& SoftmaxObjective::operator=(SoftmaxObjective&&) noexcept = default;

std::size_t SoftmaxObjective::parameter_count() const {
  return static_cast<std::size_t>(impl_->x.cols()) * kClassCount;
}

double SoftmaxObjective::value_and_gradient(std::span<const double> weights, std::span<double> gradient) const {
  const auto inputs = impl_->x.cols();
  if (weights.size() != parameter_count() || gradient.size() != parameter_count()) {
    throw std::invalid_argument("softmax: parameter vector has the wrong size");
  }
  Eigen::Map<const RowMajor> w(weights.data(), inputs, kClassCount);
  Eigen::Map<RowMajor> g(gradient.data(), inputs, kClassCount);
  const Eigen::VectorXd& weight = impl_->weight;

  const Eigen::MatrixXd logits = impl_->x * w;
  const Eigen::MatrixXd p = softmax_rows(logits);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      if (impl_->y(i, k) > 0.0) loss -= weight(i) * std::log(std::max(p(i, k), 1e-300));
    }
  }
  g = impl_->x.transpose() * (weight.asDiagonal() * (p - impl_->y));
  // Bias row (last input) is not regularized.
  const auto body = inputs - 1;
  loss += 0.5 * impl_->l2 * w.topRows(body).squaredNorm();
  g.topRows(body) += impl_->l2 * w.topRows(body);
  return loss;
}

SoftmaxModel::SoftmaxModel(std::size_t window_length, Standardizer standardizer, std::vector<double> weights)
    : window_length_(window_length), standardizer_(standardizer), weights_(std::move(weights)) {
  if (weights_.size() != softmax_input_size(window_length_) * kClassCount) {
    throw std::invalid_argument("softmax model: weight count does not match window length");
  }
}

std::vector<ProbabilityRow> SoftmaxModel::predict_proba(const WindowRefs& windows) const {
  std::vector<ProbabilityRow> out(windows.size());
  if (windows.empty()) return out;
  const Eigen::MatrixXd x = encode(windows, standardizer_, window_length_);
  Eigen::Map<const RowMajor> w(weights_.data(), x.cols(), kClassCount);
  const Eigen::MatrixXd p = softmax_rows(x * w);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < kClassCount; ++k) {
      out[i][k] = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'D', 'S', 'P', 'R', 'S', 'M', 'X', '\0'};
constexpr std::uint32_t kSchemaVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffu));
}
void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffu));
}
std::uint64_t get_bytes(std::istream& in, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw ParseError("model file truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}
std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_bytes(in, 4)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_bytes(in, 8)); }

}  // namespace

void SoftmaxModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file " + path.string());
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kSchemaVersion);
  put_u32(out, static_cast<std::uint32_t>(kFeatureWidth));
  put_u32(out, static_cast<std::uint32_t>(window_length_));
  put_u32(out, static_cast<std::uint32_t>(softmax_input_size(window_length_)));
  put_u32(out, static_cast<std::uint32_t>(kClassCount));
  put_u32(out, standardizer_.log_peak ? 1U : 0U);
  for (double m : standardizer_.mean) put_f64(out, m);
  for (double s : standardizer_.scale) put_f64(out, s);
  for (double w : weights_) put_f64(out, w);
}

SoftmaxModel SoftmaxModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file " + path.string());
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ParseError(path.string() + ": not a softmax model file");
  }
  if (get_u32(in) != kSchemaVersion) throw ParseError(path.string() + ": unsupported schema version");
  if (get_u32(in) != kFeatureWidth) throw ParseError(path.string() + ": feature width mismatch");
  const std::size_t window_length = get_u32(in);
  const std::size_t inputs = get_u32(in);
  const std::size_t classes = get_u32(in);
  if (inputs != softmax_input_size(window_length) || classes != kClassCount) {
    throw ParseError(path.string() + ": inconsistent model header");
  }
  Standardizer s;
  const std::uint32_t flags = get_u32(in);
  if (flags > 1U) throw ParseError(path.string() + ": unknown model flags");
  s.log_peak = flags == 1U;
  for (auto& m : s.mean) m = get_f64(in);
  for (auto& v : s.scale) v = get_f64(in);
  std::vector<double> weights(inputs * classes);
  for (auto& w : weights) w = get_f64(in);
  return SoftmaxModel(window_length, s, std::move(weights));
}

SoftmaxModel SoftmaxClassifier::fit(const WindowRefs& windows, std::span<const int> labels,
                                   std::span<const double> weights) const {
  if (windows.empty()) throw std::invalid_argument("softmax: empty training set");
  const Standardizer standardizer = Standardizer::fit(windows, config_.log_peak, weights);
  const SoftmaxObjective objective(windows, labels, standardizer, config_.l2, weights);

  std::mt19937_64 rng(config_.seed);
  std::normal_distribution<double> init(0.0, 0.01);
  std::vector<double> w(objective.parameter_count());
  for (auto& v : w) v = init(rng);

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = static_cast<int>(config_.max_iterations);
  options.gradient_tolerance = config_.tolerance;
  options.function_tolerance = 1e-12;
  options.parameter_tolerance = 1e-12;
  options.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  ceres::GradientProblem problem(new LossFunction(objective));
  ceres::Solve(options, problem, w.data(), &summary);
  if (summary.termination_type == ceres::FAILURE || !std::isfinite(summary.final_cost)) {
    throw NumericError("softmax: optimizer failed: " + summary.message);
  }
  last_iterations_ = summary.iterations.empty() ? 0 : summary.iterations.size() - 1;
  return SoftmaxModel(windows.front()->rows, standardizer, std::move(w));
}

std::unique_ptr<Model> SoftmaxClassifier::train(const WindowRefs& windows, std::span<const int> labels,
                                                std::span<const double> weights) {
  return std::make_unique<SoftmaxModel>(fit(windows, labels, weights));
}

}  // namespace dspr
