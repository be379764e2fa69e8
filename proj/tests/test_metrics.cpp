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

#include <doctest.h>

#include <json.hpp>
#include <random>

#include "dspr/metrics.hpp"

using namespace dspr;
using doctest::Approx;

TEST_CASE("two-class hand case") {
  const auto m = metrics_from_confusion({{2, 1}, {0, 3}});
  REQUIRE(m.per_class.size() == 2);
  CHECK(m.per_class[0].precision == 1.0);
  CHECK(m.per_class[0].recall == Approx(2.0 / 3.0));
  CHECK(m.per_class[0].f1 == Approx(0.8));
  CHECK(m.per_class[1].precision == Approx(0.75));
  CHECK(m.per_class[1].recall == 1.0);
  CHECK(m.per_class[1].f1 == Approx(6.0 / 7.0));
  CHECK(m.accuracy == Approx(5.0 / 6.0));
  CHECK(m.macro_precision == Approx(0.875));
  CHECK(m.macro_recall == Approx(5.0 / 6.0));
  CHECK(m.macro_f1 == Approx((0.8 + 6.0 / 7.0) / 2));
}

TEST_CASE("four-class hand case") {
  const std::vector<std::vector<std::size_t>> cm{{5, 1, 0, 0}, {2, 6, 2, 0}, {0, 0, 4, 1}, {0, 0, 0, 3}};
  const auto m = metrics_from_confusion(cm);
  CHECK(m.accuracy == Approx(18.0 / 24.0));
  CHECK(m.per_class[0].precision == Approx(5.0 / 7.0));
  CHECK(m.per_class[1].recall == Approx(0.6));
  CHECK(m.per_class[2].precision == Approx(4.0 / 6.0));
  CHECK(m.per_class[3].precision == Approx(0.75));
  CHECK(m.per_class[3].recall == 1.0);
  for (std::size_t t = 0; t < 4; ++t) {
    std::size_t row = 0;
    for (auto v : cm[t]) row += v;
    CHECK(m.per_class[t].support == row);
  }
}

TEST_CASE("perfect predictions") {
  std::vector<int> truth;
  std::vector<ProbabilityRow> probs;
  for (int i = 0; i < 40; ++i) {
    const int label = 1 + i % 4;
    truth.push_back(label);
    ProbabilityRow p{0.05, 0.05, 0.05, 0.05};
    p[static_cast<std::size_t>(label - 1)] = 0.85;
    probs.push_back(p);
  }
  const auto m = compute_metrics(truth, probs);
  CHECK(m.accuracy == 1.0);
  CHECK(m.macro_f1 == 1.0);
  REQUIRE(m.macro_auc);
  CHECK(*m.macro_auc == 1.0);
}

TEST_CASE("uniform random predictions") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> truth;
  std::vector<ProbabilityRow> probs;
  for (int i = 0; i < 1000; ++i) {
    truth.push_back(1 + i % 4);
    ProbabilityRow p{u(rng), u(rng), u(rng), u(rng)};
    const double s = p[0] + p[1] + p[2] + p[3];
    for (auto& v : p) v /= s;
    probs.push_back(p);
  }
  const auto m = compute_metrics(truth, probs);
  CHECK(m.accuracy == Approx(0.25).epsilon(0.2));
  CHECK(std::fabs(m.accuracy - 0.25) <= 0.05);
  CHECK(std::fabs(*m.macro_auc - 0.5) <= 0.05);
}

TEST_CASE("auc") {
  const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
  const std::vector<std::uint8_t> pos{0, 0, 1, 1};
  CHECK(*binary_auc(scores, pos) == Approx(0.75));
  const std::vector<double> tied{0.5, 0.5};
  const std::vector<std::uint8_t> mixed{0, 1};
  CHECK(*binary_auc(tied, mixed) == Approx(0.5));
  const std::vector<std::uint8_t> none{0, 0};
  CHECK_FALSE(binary_auc(tied, none));
}

TEST_CASE("absent classes are omitted from auc") {
  std::vector<int> truth{1, 1, 2, 2};
  std::vector<ProbabilityRow> probs{{0.9, 0.1, 0, 0}, {0.6, 0.4, 0, 0}, {0.2, 0.8, 0, 0}, {0.3, 0.7, 0, 0}};
  const auto m = compute_metrics(truth, probs);
  CHECK(m.omitted_auc_classes == std::vector<int>{3, 4});
  CHECK(*m.macro_auc == 1.0);
  CHECK(m.macro_recall == 1.0);
  std::vector<int> single{3, 3};
  std::vector<ProbabilityRow> p2{{0, 0, 1, 0}, {0, 0, 1, 0}};
  const auto s = compute_metrics(single, p2);
  CHECK_FALSE(s.macro_auc);
  CHECK(s.accuracy == 1.0);
  CHECK_THROWS_AS(compute_metrics(std::vector<int>{}, std::vector<ProbabilityRow>{}), std::invalid_argument);
}

TEST_CASE("metrics are invariant to test-set order") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> truth;
  std::vector<ProbabilityRow> probs;
  for (int i = 0; i < 200; ++i) {
    truth.push_back(1 + static_cast<int>(rng() % 4));
    ProbabilityRow p{u(rng), u(rng), u(rng), u(rng)};
    const double s = p[0] + p[1] + p[2] + p[3];
    for (auto& v : p) v /= s;
    probs.push_back(p);
  }
  const auto a = compute_metrics(truth, probs);
  std::vector<std::size_t> order(truth.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> t2;
  std::vector<ProbabilityRow> p2;
  for (auto i : order) {
    t2.push_back(truth[i]);
    p2.push_back(probs[i]);
  }
  const auto b = compute_metrics(t2, p2);
  CHECK(a.confusion == b.confusion);
  CHECK(a.macro_f1 == Approx(b.macro_f1));
  CHECK(*a.macro_auc == Approx(*b.macro_auc));
}

TEST_CASE("metrics json carries the comparison fields") {
  const auto m = metrics_from_confusion({{2, 1}, {0, 3}});
  const auto j = nlohmann::json::parse(metrics_json(m));
  for (const char* key : {"accuracy", "precision", "recall", "f1", "auc", "confusion", "per_class"}) {
    CHECK(j.contains(key));
  }
}
