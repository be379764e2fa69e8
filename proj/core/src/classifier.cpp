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

#include <cmath>
#include <fstream>
#include <sstream>

#include "dspr/classifier.hpp"

namespace dspr {

void check_simplex(std::span<const ProbabilityRow> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double sum = 0.0;
    for (double p : rows[i]) {
      if (!std::isfinite(p) || p < 0.0) {
        throw NumericError("probability row " + std::to_string(i) + " has a negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw NumericError("probability row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
}

std::vector<ProbabilityRow> predict_checked(const Model& model, const WindowRefs& windows) {
  auto rows = model.predict_proba(windows);
  if (rows.size() != windows.size()) {
    throw NumericError("classifier returned " + std::to_string(rows.size()) + " rows for " +
                       std::to_string(windows.size()) + " windows");
  }
  check_simplex(rows);
  return rows;
}

int predicted_label(const ProbabilityRow& row) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = k;
  }
  return static_cast<int>(best) + 1;
}

WindowRefs window_refs(const std::vector<FeatureWindow>& windows, std::span<const std::size_t> indices) {
  WindowRefs out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(&windows.at(i));
  return out;
}

double Standardizer::raw(const FeatureWindow& w, std::size_t r, std::size_t column) {
  if (column != kPeakColumn) return w.at(r, column);
  double peak = w.at(r, kRiskColumn);
  for (std::size_t c = kRiskColumn + 1; c < kFeatureWidth; ++c) peak = std::max(peak, w.at(r, c));
  return peak;
}

double Standardizer::transform(std::size_t column, double value) const {
  if (!log_peak || column != kPeakColumn) return value;
  return std::copysign(std::log1p(std::abs(value)), value);
}

Standardizer Standardizer::fit(const WindowRefs& windows, bool log_peak, std::span<const double> weights) {
  Standardizer s;
  s.log_peak = log_peak;
  s.scale.fill(1.0);
  if (windows.empty()) return s;
  std::array<double, kStandardizedColumns> sum{};
  std::array<double, kStandardizedColumns> sum2{};
  double n = 0.0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const FeatureWindow& w = *windows[i];
    const double weight = weights.empty() ? 1.0 : weights[i];
    for (std::size_t r = 0; r < w.rows; ++r) {
      for (std::size_t c = 0; c < kStandardizedColumns; ++c) {
        const double v = s.transform(c, raw(w, r, c));
        sum[c] += weight * v;
        sum2[c] += weight * v * v;
      }
      n += weight;
    }
  }
  if (!(n > 0.0)) return s;
  for (std::size_t c = 0; c < kStandardizedColumns; ++c) {
    if (c == kRoadColumn) {
      s.mean[c] = 0.0;
      s.scale[c] = 1.0;
      continue;
    }
    s.mean[c] = sum[c] / n;
    const double var = std::max(0.0, sum2[c] / n - s.mean[c] * s.mean[c]);
    const double sd = std::sqrt(var);
    s.scale[c] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::vector<std::pair<std::size_t, ProbabilityRow>> read_probability_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open probability file " + path.string());
  std::vector<std::pair<std::size_t, ProbabilityRow>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("window", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 1 + kClassCount) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected window,p1,p2,p3,p4");
    }
    try {
      ProbabilityRow row{};
      for (std::size_t k = 0; k < row.size(); ++k) row[k] = std::stod(cells[k + 1]);
      out.emplace_back(std::stoul(cells[0]), row);
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  return out;
}

void write_probability_file(const std::filesystem::path& path, std::span<const std::size_t> windows,
                            std::span<const ProbabilityRow> probabilities) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write probability file " + path.string());
  out.precision(17);
  out << "window,p1,p2,p3,p4\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out << windows[i];
    for (double p : probabilities[i]) out << ',' << p;
    out << '\n';
  }
}

}  // namespace dspr
