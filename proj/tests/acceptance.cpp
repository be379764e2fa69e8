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

// Acceptance gate: one PASS/FAIL line per criterion; nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "dspr/baseline_ttc.hpp"
#include "dspr/classifier.hpp"
#include "dspr/dataset.hpp"
#include "dspr/dspr_model.hpp"
#include "dspr/geometry.hpp"
#include "dspr/metrics.hpp"
#include "dspr/self_train.hpp"
#include "dspr/study.hpp"
#include "dspr/synthetic.hpp"
#include "oracles.hpp"

using namespace dspr;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }

TrafficObject object_from(const oracle::Encounter& e) {
  TrafficObject o;
  o.id = "o";
  o.state = oracle::state(e.obj);
  o.footprint_length = e.length;
  o.footprint_width = e.width;
  if (e.length < 1.0) o.kind = ObjectKind::pedestrian;
  return o;
}

Outcome geometry_oracle() {
  Outcome out;
  const DsprParams p;
  std::mt19937_64 rng(20260101);
  const auto t0 = std::chrono::steady_clock::now();
  int triggered = 0, mismatched = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto e = oracle::random_encounter(rng);
    const TrafficObject obj = object_from(e);
    for (auto tier : {RpdTier::strong, RpdTier::weak}) {
      const auto c = first_contact(oracle::state(e.ego), obj, tier, p);
      const auto d = oracle::dense_scan(e.ego, e.obj, e.length, e.width,
                                        tier == RpdTier::strong ? oracle::strong(p) : oracle::weak(p), p, 1e-4);
      if (c.triggered != d.has_value()) {
        ++mismatched;
        continue;
      }
      if (d) {
        ++triggered;
        worst = std::max(worst, std::fabs(c.t_r - *d));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  out.require(mismatched == 0, std::to_string(mismatched) + " trigger disagreements");
  out.require(worst <= 2e-3, "max |dt_r| " + fmt("%.3g", worst));
  out.require(elapsed < 60.0, "runtime " + fmt("%.1f", elapsed) + " s");
  out.require(triggered >= 100, "too few triggered encounters (" + std::to_string(triggered) + ")");
  out.note("500 encounters x 2 tiers, " + std::to_string(triggered) + " triggered, max |dt_r| = " +
           fmt("%.2e", worst) + " s, " + fmt("%.1f", elapsed) + " s");
  return out;
}

Outcome closed_form_chain() {
  Outcome out;
  const DsprParams p;
  TrafficObject obj;
  obj.id = "lead";
  obj.state.position = {30, 0};
  obj.state.velocity = {-10, 0};
  obj.state.heading = kPi;
  const auto b = object_risk(KinematicState{}, obj, p);
  out.require(b.triggered && b.t_r.has_value(), "not triggered");
  if (!out.pass) return out;
  // Gap 30 - 4.8 (RPD half length at rest) - 2.4 (body half length) closes at 10 m/s.
  const double t_r = (30.0 - 4.8 - 2.4) / 10.0;
  const double alpha_t = 4.0 / (4.0 + t_r);
  const double alpha_ss = 9.6 / 30.0;
  const double s_theta = 1.0 * (1.0 + 1.0) + 0.4 * 0.0 + 0.5;
  // Closing branch with v_rel = v_b = |v_relp| = 10.
  const double energy = 0.5 * 5.0 * ((1 - 0.12) * 10 + 0.12 * 10) * (0.12 * 20);
  const double risk = alpha_t * alpha_ss * 1.0 * s_theta * energy;
  const double tol = 1e-6;
  out.require(rel_close(*b.t_r, t_r, tol) && rel_close(t_r, 2.28, 1e-12), "t_r " + fmt("%.9f", *b.t_r));
  out.require(rel_close(b.alpha_t, alpha_t, tol), "alpha_t " + fmt("%.9f", b.alpha_t));
  out.require(rel_close(b.alpha_ss, alpha_ss, tol) && rel_close(alpha_ss, 0.32, 1e-12), "alpha_ss");
  out.require(b.alpha_ws == 1.0, "alpha_ws");
  out.require(rel_close(b.s_theta, s_theta, tol) && rel_close(s_theta, 2.5, 1e-12), "s_theta");
  out.require(rel_close(b.energy, energy, tol) && rel_close(energy, 60.0, 1e-12), "E_p " + fmt("%.9f", b.energy));
  out.require(rel_close(b.risk, risk, tol), "R " + fmt("%.9f", b.risk));
  out.require(std::fabs(risk - 30.57) < 5e-3, "R oracle " + fmt("%.6f", risk));
  out.note("t_r = " + fmt("%.7f", *b.t_r) + ", alpha_t = " + fmt("%.7f", b.alpha_t) + ", alpha_ss = " +
           fmt("%.7f", b.alpha_ss) + ", s_theta = " + fmt("%.7f", b.s_theta) + ", E_p = " + fmt("%.7f", b.energy) +
           ", R = " + fmt("%.7f", b.risk));
  return out;
}

Outcome equation_suite() {
  Outcome out;
  const DsprParams p;
  const double tol = 1e-9;
  auto close = [&](double got, double want) {
    return want == 0.0 ? std::fabs(got) <= 1e-300 : rel_close(got, want, tol);
  };
  int n_time = 0, n_sens = 0, n_energy = 0, n_background = 0, bad = 0;
  for (int i = 0; i <= 40; ++i, ++n_time) {
    const double t = p.horizon * i / 40.0;
    bad += !close(time_decay(t, p.horizon), oracle::alpha_t(t, p.horizon));
  }
  for (int i = 0; i <= 180; ++i, ++n_sens) {
    const double th = kPi * i / 180.0;
    bad += !close(observation_sensitivity(th, p), oracle::s_theta(th, 1.0, 0.4, 0.5));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-25, 25);
  for (int i = 0; i < 60; ++i) {
    KinematicState ego, obj;
    ego.velocity = {u(rng), u(rng)};
    obj.velocity = {u(rng), u(rng)};
    ego.position = {u(rng), u(rng)};
    obj.position = {u(rng), u(rng)};
    const auto kind = i % 2 ? ObjectKind::pedestrian : ObjectKind::vehicle;
    const double m = i % 2 ? 10.0 : 5.0;
    const double dvx = obj.velocity.x - ego.velocity.x, dvy = obj.velocity.y - ego.velocity.y;
    const double dx = obj.position.x - ego.position.x, dy = obj.position.y - ego.position.y;
    const double v_rel = std::hypot(dvx, dvy);
    const double v_b = std::hypot(ego.velocity.x, ego.velocity.y) + std::hypot(obj.velocity.x, obj.velocity.y);
    const double v_relp = (dvx * dx + dvy * dy) / std::hypot(dx, dy);
    bad += !close(relative_kinetic_energy(ego, obj, kind, p), oracle::energy(m, 0.12, v_rel, v_b, v_relp));
    ++n_energy;
    bad += !close(background_energy(ego, kind, p), oracle::background(m, 0.12, std::hypot(ego.velocity.x, ego.velocity.y)));
    ++n_background;
  }
  // Spot values from hand substitution.
  KinematicState e10, o10;
  e10.velocity = {10, 0};
  o10.velocity = {-10, 0};
  o10.position = {30, 0};
  bad += !close(relative_kinetic_energy(e10, o10, ObjectKind::vehicle, p), 240.0);
  bad += !close(background_energy(e10, ObjectKind::vehicle, p), 3.6);
  bad += !close(background_energy(e10, ObjectKind::pedestrian, p), 7.2);
  bad += !close(observation_sensitivity(kPi / 4, p), 2.3);
  bad += !close(observation_sensitivity(kPi, p), 1.3);
  out.require(bad == 0, std::to_string(bad) + " mismatches");
  out.note("grid points: time decay " + std::to_string(n_time) + ", sensitivity " + std::to_string(n_sens) +
           ", kinetic energy " + std::to_string(n_energy) + ", background " + std::to_string(n_background) +
           ", tolerance 1e-9 relative");
  return out;
}

Frame random_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto range = [&](double a, double b) { return a + (b - a) * u(rng); };
  Frame f;
  f.ego.heading = range(-kPi + 1e-9, kPi);
  const double ev = range(0, 30);
  f.ego.velocity = {ev * std::cos(f.ego.heading), ev * std::sin(f.ego.heading)};
  f.ego.acceleration = {range(-4, 4), range(-4, 4)};
  f.road_condition = 1 + static_cast<int>(rng() % 6);
  const int n = static_cast<int>(rng() % 8);
  for (int k = 0; k < n; ++k) {
    TrafficObject o;
    o.id = "o" + std::to_string(k);
    o.kind = u(rng) < 0.3 ? ObjectKind::pedestrian : ObjectKind::vehicle;
    o.state.position = {range(-70, 70), range(-40, 40)};
    o.state.heading = range(-kPi + 1e-9, kPi);
    const double v = o.kind == ObjectKind::pedestrian ? range(0, 3) : range(0, 30);
    o.state.velocity = {v * std::cos(o.state.heading), v * std::sin(o.state.heading)};
    o.state.acceleration = {range(-3, 3), range(-3, 3)};
    if (o.kind == ObjectKind::pedestrian) o.footprint_length = o.footprint_width = 0.6;
    if (u(rng) < 0.05) o.state.position = f.ego.position;  // coincident centres
    f.objects.push_back(o);
  }
  return f;
}

Outcome invariant_fuzz() {
  Outcome out;
  const DsprParams p;
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(-30, 30);
  std::size_t values = 0, breakdowns = 0, velocity_checks = 0;
  int bad_value = 0, bad_alpha = 0, bad_sens = 0, bad_velocity = 0;
  for (int i = 0; i < 10000; ++i) {
    const Frame f = random_frame(rng);
    const auto r = risk_vector(f, p);
    for (double v : r.values) {
      ++values;
      bad_value += !(std::isfinite(v) && v >= 0.0);
    }
    const auto slots = nearest_objects(f);
    for (const auto& b : r.breakdowns) {
      ++breakdowns;
      bad_alpha += !(b.alpha_t >= 0.5 && b.alpha_t <= 1.0);
      bad_sens += !(b.s_theta >= 0.5 - 1e-12 && b.s_theta <= 3.3 + 1e-12);
      if (!b.triggered) {
        TrafficObject changed = *slots[b.slot];
        changed.state.velocity = {u(rng), u(rng)};
        changed.state.acceleration = {u(rng) / 10, u(rng) / 10};
        const auto again = object_risk(f.ego, changed, p);
        if (!again.triggered) {
          ++velocity_checks;
          bad_velocity += again.risk != b.risk;
        }
      }
    }
  }
  out.require(bad_value == 0, std::to_string(bad_value) + " non-finite or negative values");
  out.require(bad_alpha == 0, std::to_string(bad_alpha) + " alpha_t outside [0.5, 1]");
  out.require(bad_sens == 0, std::to_string(bad_sens) + " s_theta outside [0.5, 3.3]");
  out.require(bad_velocity == 0, std::to_string(bad_velocity) + " untriggered risks changed with object velocity");
  out.require(velocity_checks > 1000, "too few velocity checks");
  out.note("10000 frames, " + std::to_string(values) + " slot values, " + std::to_string(breakdowns) +
           " object breakdowns, " + std::to_string(velocity_checks) + " velocity-independence checks");
  return out;
}

Outcome pipeline_shapes() {
  Outcome out;
  const auto s = gen_scenario(ScenarioKind::mixed, 15.0, 3, "shape");
  std::vector<FeatureFrame> rows;
  std::vector<double> stamps;
  for (const auto& f : s.frames) {
    rows.push_back(feature_frame(f, risk_vector(f, DsprParams{}).values));
    stamps.push_back(f.timestamp);
  }
  out.require(rows.front().size() == 46, "feature row width");
  const auto windows = feature_windows(rows, kDefaultWindowLength, s.id, stamps);
  out.require(kDefaultWindowLength == 10, "default window length");
  out.require(windows.size() == s.frames.size() - 10 + 1, "window count");
  bool shapes = true, rows_match = true;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    shapes = shapes && windows[i].rows == 10 && windows[i].values.size() == 10 * 46;
    for (std::size_t r = 0; r < 10; ++r)
      for (std::size_t c = 0; c < 46; ++c) rows_match = rows_match && windows[i].at(r, c) == rows[i + r][c];
  }
  out.require(shapes, "window shape");
  out.require(rows_match, "window rows differ from source frames");
  for (std::size_t n : {9u, 10u, 100u}) {
    std::vector<FeatureFrame> part(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> ts(stamps.begin(), stamps.begin() + static_cast<std::ptrdiff_t>(n));
    const std::size_t expect = n >= 10 ? n - 10 + 1 : 0;
    out.require(feature_windows(part, 10, s.id, ts).size() == expect, "window count for " + std::to_string(n));
  }
  out.note("row width 46, window 10 x 46, " + std::to_string(windows.size()) + " windows from " +
           std::to_string(s.frames.size()) + " frames");
  return out;
}

Outcome label_logic() {
  Outcome out;
  const ClassThresholds th;
  out.require(th.p_true == std::array<double, 4>{0.9, 0.75, 0.65, 0.6}, "default thresholds");
  // For each class, 20 raters: exactly at the threshold passes, one vote less does not.
  const int at[4] = {18, 15, 13, 12};
  for (int k = 0; k < 4; ++k) {
    for (int delta : {0, -1}) {
      RatingPanel panel;
      const int top = at[k] + delta;
      for (int i = 0; i < 20; ++i) panel.ratings.push_back({i < top ? k + 1 : (k + 1) % 4 + 1});
      const auto fl = consistency_filter(panel, th).front();
      const bool want = delta == 0;
      out.require(fl.label.has_value() == want && (!want || *fl.label == k + 1),
                  "class " + std::to_string(k + 1) + (want ? " at" : " below") + " threshold");
    }
  }
  {
    Scenario s;
    s.frames.resize(1);
    RatingPanel panel;
    for (int i = 0; i < 10; ++i) panel.ratings.push_back({i < 5 ? 5 : (i < 9 ? 4 : 3)});
    const auto v = validate_panel(panel, s);
    const auto fl = consistency_filter(v, th).front();
    out.require(fl.label == 4 && std::fabs(fl.consistency - 0.9) < 1e-12, "rating 5 merged into 4");
  }
  {
    RatingPanel panel;
    for (int i = 0; i < 12; ++i) panel.ratings.push_back({i < 6 ? 2 : 3});
    out.require(!consistency_filter(panel, th).front().label, "tie leaves the frame unlabeled");
  }
  // SMOTE-NC on an imbalanced set drawn from real synthetic windows.
  const auto inputs = make_synthetic_inputs("default", 7, default_panel(), DsprParams{});
  StudyConfig cfg;
  const auto windows = build_windows(inputs, make_dspr_model(cfg.params), cfg.window_length, 1);
  std::vector<FeatureWindow> set;
  std::array<int, 4> want{300, 40, 25, 7};
  std::array<int, 4> have{};
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const double g = [&] {
      double m = 0;
      for (std::size_t s = 0; s < kSlotCount; ++s) m = std::max(m, windows[i].at(windows[i].rows - 1, kRiskColumn + s));
      return m;
    }();
    const int k = g < 5 ? 0 : g < 20 ? 1 : g < 60 ? 2 : 3;
    if (have[static_cast<std::size_t>(k)] < want[static_cast<std::size_t>(k)]) {
      FeatureWindow w = windows[i];
      w.label = k + 1;
      set.push_back(w);
      ++have[static_cast<std::size_t>(k)];
    }
  }
  out.require(have == want, "could not assemble the imbalanced set");
  const auto balanced = smote_nc(set, {5, 11});
  const auto counts = class_counts(balanced);
  out.require(std::all_of(counts.begin(), counts.end(), [&](std::size_t c) { return c == counts[0]; }) &&
                  counts[0] == 300,
              "class counts not uniform");
  std::array<std::set<double>, 4> nominal;
  for (const auto& w : set)
    for (std::size_t r = 0; r < w.rows; ++r) nominal[static_cast<std::size_t>(*w.label - 1)].insert(w.at(r, kRoadColumn));
  std::size_t synthetic = 0, foreign = 0;
  for (std::size_t i = set.size(); i < balanced.size(); ++i) {
    ++synthetic;
    const auto& w = balanced[i];
    for (std::size_t r = 0; r < w.rows; ++r) foreign += nominal[static_cast<std::size_t>(*w.label - 1)].count(w.at(r, kRoadColumn)) == 0;
  }
  out.require(foreign == 0, std::to_string(foreign) + " synthetic road values not seen in their class");
  out.note("thresholds 0.9/0.75/0.65/0.6 exact at 20 raters, 5->4 merge, tie unlabeled; SMOTE-NC {300,40,25,7} -> "
           "{" + std::to_string(counts[0]) + "," + std::to_string(counts[1]) + "," + std::to_string(counts[2]) + "," +
           std::to_string(counts[3]) + "} with " + std::to_string(synthetic) + " synthetic windows");
  return out;
}

Outcome self_train_mechanics() {
  Outcome out;
  const auto inputs = make_synthetic_inputs("default", 7, default_panel(), DsprParams{});
  StudyConfig cfg;
  cfg.classifier.max_iterations = 60;
  const auto ds = build_dataset(inputs, make_dspr_model(cfg.params), cfg);
  const std::size_t unlabeled = ds.indices(Partition::train_unlabeled).size();
  const std::size_t truth = ds.indices(Partition::train_true).size();

  SoftmaxClassifier clf(seeded(cfg));
  SelfTrainConfig st;
  st.iterations = 5;

  st.epsilon = 1.01;
  const auto none = self_train(ds, clf, st);
  out.require(none.audit.adoptions.empty() && none.audit.final_training_size == truth, "epsilon 1.01 adopted windows");

  st.epsilon = 0.0;
  const auto all = self_train(ds, clf, st);
  out.require(all.audit.entries.front().adopted == unlabeled && all.audit.residual == 0,
              "epsilon 0 did not adopt every window at iteration 1");

  st.epsilon = 0.9;
  const auto a = self_train(ds, clf, st);
  std::size_t last = 0;
  bool monotone = true;
  for (const auto& e : a.audit.entries) {
    monotone = monotone && e.pseudo_total >= last;
    last = e.pseudo_total;
  }
  std::set<std::size_t> adopted;
  bool disjoint = true;
  for (const auto& ad : a.audit.adoptions) {
    disjoint = disjoint && ds.windows[ad.window].partition == Partition::train_unlabeled && adopted.insert(ad.window).second;
  }
  out.require(monotone, "pseudo-label set shrank");
  out.require(disjoint, "pseudo labels overlap the true set or repeat");

  SoftmaxClassifier clf2(seeded(cfg));
  const auto b = self_train(ds, clf2, st);
  out.require(a.audit.to_csv() == b.audit.to_csv(), "audit logs differ between identical runs");
  out.note("|R_U| = " + std::to_string(unlabeled) + "; eps 1.01 -> 0 adopted; eps 0 -> " +
           std::to_string(all.audit.entries.front().adopted) + " at iteration 1; eps 0.9 -> " +
           std::to_string(a.audit.adoptions.size()) + " adopted, audit logs bit-identical");
  return out;
}

Outcome end_to_end() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  StudyConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());

  const auto noisy = make_synthetic_inputs("default", cfg.seed, default_panel(0.3), cfg.params, cfg.threads);
  const auto results = compare_models(noisy, {make_dspr_model(cfg.params), make_ttc_model(cfg.ttc_cap)}, cfg);
  const auto& dspr_run = results[0];
  const auto& ttc_run = results[1];
  const double gain = dspr_run.self_trained.accuracy - dspr_run.baseline.accuracy;
  out.require(gain >= 0.05, "gain " + fmt("%.4f", gain));
  out.require(dspr_run.self_trained.accuracy > ttc_run.self_trained.accuracy, "DSPR features did not beat 1/TTC");

  const auto clean = make_synthetic_inputs("default", cfg.seed, default_panel(0.0), cfg.params, cfg.threads);
  const auto model = make_dspr_model(cfg.params);
  const auto ds = build_dataset(clean, model, cfg);
  std::vector<const FeatureWindow*> train, test;
  std::vector<int> train_y, test_y;
  for (const auto& w : ds.windows) {
    if (w.partition == Partition::train_true) {
      train.push_back(&w);
      train_y.push_back(*w.label);
    } else if (w.partition == Partition::test_true) {
      test.push_back(&w);
      test_y.push_back(*w.label);
    }
  }
  const auto reference = SoftmaxClassifier(seeded(cfg)).fit(train, train_y);
  const double supervised = evaluate(reference, test, test_y).accuracy;
  SoftmaxClassifier clf(seeded(cfg));
  const double self_trained = study_on_dataset(ds, "dspr", clf, cfg).self_trained.accuracy;
  out.require(supervised >= 0.95, "noise-free reference accuracy " + fmt("%.4f", supervised));
  out.require(self_trained >= 0.95, "noise-free self-trained accuracy " + fmt("%.4f", self_trained));

  const double elapsed = seconds_since(t0);
  out.require(elapsed < 300.0, "runtime " + fmt("%.0f", elapsed) + " s");
  out.note("noise 0.3: self-trained " + fmt("%.4f", dspr_run.self_trained.accuracy) + " vs raw-label baseline " +
           fmt("%.4f", dspr_run.baseline.accuracy) + " (gain " + fmt("%+.2f", 100 * gain) + " pts); 1/TTC " +
           fmt("%.4f", ttc_run.self_trained.accuracy) + "; noise 0: reference " + fmt("%.4f", supervised) +
           ", self-trained " + fmt("%.4f", self_trained) + "; " + fmt("%.0f", elapsed) + " s on " +
           std::to_string(cfg.threads) + " thread(s)");
  return out;
}

Outcome metrics_correctness() {
  Outcome out;
  const auto two = metrics_from_confusion({{2, 1}, {0, 3}});
  out.require(two.per_class[0].precision == 1.0 && std::fabs(two.per_class[0].recall - 2.0 / 3.0) < 1e-12,
              "2x2 precision/recall");
  out.require(std::fabs(two.per_class[0].f1 - 0.8) < 1e-12 && std::fabs(two.per_class[1].f1 - 6.0 / 7.0) < 1e-12,
              "2x2 F1");
  const auto four = metrics_from_confusion({{5, 1, 0, 0}, {2, 6, 2, 0}, {0, 0, 4, 1}, {0, 0, 0, 3}});
  out.require(std::fabs(four.accuracy - 0.75) < 1e-12, "4x4 accuracy");
  const double mp = (5.0 / 7 + 6.0 / 7 + 4.0 / 6 + 3.0 / 4) / 4;
  const double mr = (5.0 / 6 + 6.0 / 10 + 4.0 / 5 + 1.0) / 4;
  out.require(std::fabs(four.macro_precision - mp) < 1e-12 && std::fabs(four.macro_recall - mr) < 1e-12, "4x4 macro");

  std::vector<int> truth;
  std::vector<ProbabilityRow> perfect, random;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int label = 1 + i % 4;
    truth.push_back(label);
    ProbabilityRow p{};
    p[static_cast<std::size_t>(label - 1)] = 1.0;
    perfect.push_back(p);
    ProbabilityRow r{u(rng), u(rng), u(rng), u(rng)};
    const double s = r[0] + r[1] + r[2] + r[3];
    for (auto& v : r) v /= s;
    random.push_back(r);
  }
  const auto mp_ = compute_metrics(truth, perfect);
  out.require(mp_.accuracy == 1.0 && mp_.macro_auc && *mp_.macro_auc == 1.0, "perfect classifier");
  const auto mr_ = compute_metrics(truth, random);
  out.require(std::fabs(mr_.accuracy - 0.25) <= 0.05, "random accuracy " + fmt("%.3f", mr_.accuracy));
  out.note("hand cases match; perfect accuracy = AUC = 1; random accuracy " + fmt("%.3f", mr_.accuracy) +
           " on 1000 balanced samples");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"geometry_oracle", geometry_oracle},
      {"closed_form_chain", closed_form_chain},
      {"equation_suite", equation_suite},
      {"invariant_fuzz", invariant_fuzz},
      {"pipeline_shapes", pipeline_shapes},
      {"label_logic", label_logic},
      {"self_train_mechanics", self_train_mechanics},
      {"end_to_end_study", end_to_end},
      {"metrics_correctness", metrics_correctness},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
