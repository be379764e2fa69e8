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

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dspr/dataset.hpp"
#include "json.hpp"

namespace dspr {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ParseError("windows.bin: truncated");
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<int> optional_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stoi(s);
}

}  // namespace

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t rows = dataset.windows.empty() ? kDefaultWindowLength : dataset.windows.front().rows;

  std::ofstream bin(dir / "windows.bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + (dir / "windows.bin").string());
  put_u32(bin, static_cast<std::uint32_t>(dataset.windows.size()));
  put_u32(bin, static_cast<std::uint32_t>(rows));
  put_u32(bin, static_cast<std::uint32_t>(kFeatureWidth));
  for (const auto& w : dataset.windows) {
    if (w.rows != rows || w.values.size() != rows * kFeatureWidth) {
      throw std::invalid_argument("save_dataset: windows differ in shape");
    }
    for (double v : w.values) put_u32(bin, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }

  std::ofstream index(dir / "index.csv");
  if (!index) throw std::runtime_error("cannot write " + (dir / "index.csv").string());
  index.precision(12);
  index << "index,source,end_timestamp,label,provenance,partition,raw_label,end_frame,synthetic,n1,n2,n3,n4\n";
  for (std::size_t i = 0; i < dataset.windows.size(); ++i) {
    const auto& w = dataset.windows[i];
    index << i << ',' << w.source.scenario_id << ',' << w.source.end_timestamp << ',';
    if (w.label) index << *w.label;
    index << ',' << to_string(w.provenance) << ',' << to_string(w.partition) << ',';
    if (w.raw_label) index << *w.raw_label;
    index << ',' << w.source.end_frame << ',' << (w.synthetic ? 1 : 0);
    for (auto n : w.ratings) index << ',' << n;
    index << '\n';
  }

  nlohmann::json meta{{"split_ratio", dataset.split_ratio},
                      {"seed", dataset.seed},
                      {"train_scenarios", dataset.train_scenarios},
                      {"test_scenarios", dataset.test_scenarios},
                      {"window_length", rows},
                      {"feature_width", kFeatureWidth}};
  std::ofstream(dir / "dataset.json") << meta.dump(2) << '\n';
}

LabeledDataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream bin(dir / "windows.bin", std::ios::binary);
  if (!bin) throw ParseError("cannot open " + (dir / "windows.bin").string());
  const std::uint32_t count = get_u32(bin);
  const std::uint32_t rows = get_u32(bin);
  const std::uint32_t width = get_u32(bin);
  if (width != kFeatureWidth) throw ParseError("windows.bin: feature width " + std::to_string(width) + " != 46");

  LabeledDataset ds;
  ds.windows.resize(count);
  for (auto& w : ds.windows) {
    w.rows = rows;
    w.values.resize(static_cast<std::size_t>(rows) * width);
    for (auto& v : w.values) v = static_cast<double>(std::bit_cast<float>(get_u32(bin)));
  }

  std::ifstream index(dir / "index.csv");
  if (!index) throw ParseError("cannot open " + (dir / "index.csv").string());
  std::string line;
  std::getline(index, line);
  std::size_t n = 0;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    try {
      const auto cells = split_csv(line);
      if (cells.size() < 6) throw ParseError("index.csv: short row " + std::to_string(n));
      const std::size_t i = std::stoul(cells[0]);
      if (i >= count) throw ParseError("index.csv: window index out of range");
      auto& w = ds.windows[i];
      w.source.scenario_id = cells[1];
      w.source.end_timestamp = std::stod(cells[2]);
      w.label = optional_int(cells[3]);
      w.provenance = parse_provenance(cells[4]);
      w.partition = parse_partition(cells[5]);
      if (cells.size() > 6) w.raw_label = optional_int(cells[6]);
      if (cells.size() > 7) w.source.end_frame = std::stoul(cells[7]);
      if (cells.size() > 8) w.synthetic = cells[8] == "1";
      if (cells.size() > 12) {
        for (std::size_t k = 0; k < kClassCount; ++k) {
          w.ratings[k] = static_cast<std::uint16_t>(std::stoul(cells[9 + k]));
        }
      }
    } catch (const std::logic_error& e) {
      throw ParseError("index.csv row " + std::to_string(n) + ": " + e.what());
    }
    ++n;
  }
  if (n != count) throw ParseError("index.csv: row count does not match windows.bin");

  std::ifstream meta_in(dir / "dataset.json");
  if (meta_in) {
    try {
      const auto meta = nlohmann::json::parse(meta_in);
      ds.split_ratio = meta.value("split_ratio", 0.7);
      ds.seed = meta.value("seed", std::uint64_t{0});
      ds.train_scenarios = meta.value("train_scenarios", std::vector<std::string>{});
      ds.test_scenarios = meta.value("test_scenarios", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("dataset.json: ") + e.what());
    }
  }
  return ds;
}

}  // namespace dspr
