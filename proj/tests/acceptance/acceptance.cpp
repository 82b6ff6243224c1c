/*
 * Copyright 2026 The signemo Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Tolerances and runtime budgets are fixed below and are not configurable.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "signemo/cli/cli.hpp"
#include "signemo/corpus/label_map.hpp"
#include "signemo/evaluation/agreement.hpp"
#include "signemo/evaluation/metrics.hpp"
#include "signemo/features/fusion.hpp"
#include "signemo/features/segment.hpp"
#include "signemo/model/network.hpp"
#include "signemo/model/trainer.hpp"
#include "signemo/util/io.hpp"
#include "signemo/util/random.hpp"
#include "support/oracles.hpp"

namespace {

using namespace signemo;
namespace fs = std::filesystem;

constexpr double kAc1Tol = 1e-4;
constexpr double kMetricTol = 1e-9;
constexpr double kCanonTol = 1e-6;
constexpr double kGradTol = 1e-4;
constexpr double kTrainAccMin = 0.90;
constexpr std::size_t kMaxEpochs = 30;
constexpr double kChanceBand = 0.10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---- 1 ------------------------------------------------------------------

Outcome ac1_arithmetic() {
  const double ac1 = evaluation::ac1_from_agreements(0.6467, 0.0762);
  // The observed agreement is the consensus count over the doubly annotated set.
  const std::size_t consensus = 48 + 25 + 26 + 10 + 5 + 8 + 808;
  const double p_o = static_cast<double>(consensus) / 1438.0;
  Outcome o;
  o.pass = std::abs(ac1 - 0.6176) <= kAc1Tol && consensus == 930 && std::abs(p_o - 0.6467) < 5e-5;
  o.detail = fmt("ac1=%.6f consensus=%g p_o=%.5f", ac1, static_cast<double>(consensus), p_o);
  return o;
}

// ---- 2 ------------------------------------------------------------------

Outcome emosign_mapping() {
  const std::vector<std::pair<std::string, int>> table = {
      {"Happyness", 54}, {"Sadness", 10},      {"Frustration", 19},  {"Anger", 3},
      {"Disgust", 10},   {"Fear", 7},          {"Worry", 14},        {"Surprise_pos", 5},
      {"Surprise_neg", 7}, {"Neutral", 11}};
  std::vector<corpus::ClipRecord> records;
  for (const auto& [name, n] : table) {
    for (int i = 0; i < n; ++i) {
      corpus::ClipRecord r;
      r.clip_id = name + "_" + std::to_string(i);
      r.external_label = name;
      records.push_back(std::move(r));
    }
  }
  const auto c = corpus::mapped_distribution(records, corpus::emosign_label_map());
  ClassCounts expect{};
  expect[index_of(Emotion::kJoy)] = 54;
  expect[index_of(Emotion::kSadness)] = 29;
  expect[index_of(Emotion::kAnger)] = 3;
  expect[index_of(Emotion::kDisgust)] = 10;
  expect[index_of(Emotion::kFear)] = 21;
  expect[index_of(Emotion::kSurprise)] = 12;
  expect[index_of(Emotion::kNeutral)] = 11;
  std::size_t total = 0;
  for (auto v : c) total += v;
  Outcome o;
  o.pass = c == expect && total == 140;
  std::ostringstream d;
  for (Emotion e : kTableOrder) d << to_string(e) << "=" << c[index_of(e)] << " ";
  d << "total=" << total;
  o.detail = d.str();
  return o;
}

// ---- 3 ------------------------------------------------------------------

Outcome acted_grid() {
  std::vector<std::string> utts;
  for (int i = 0; i < 78; ++i) utts.push_back("utt" + std::to_string(i));
  const auto grid = corpus::build_acted_grid(utts, {"signer1", "signer2"});
  // Every (utterance, signer, emotion) triple must appear once: ids are
  // distinct and each (signer, emotion) cell holds all 78 utterances.
  std::set<std::string> ids;
  std::map<std::pair<std::string, Emotion>, std::set<std::string>> cells;
  bool all_gold = true;
  for (const auto& r : grid) {
    const auto* l = r.find_label(corpus::LabelSource::kGoldActed);
    if (!l || r.labels.size() != 1) {
      all_gold = false;
      continue;
    }
    ids.insert(r.clip_id);
    const auto utt = r.clip_id.substr(0, r.clip_id.find('_'));
    cells[{r.signer_id, l->label}].insert(utt);
  }
  const bool full = cells.size() == 2 * kNumEmotions &&
                    std::all_of(cells.begin(), cells.end(), [](const auto& kv) { return kv.second.size() == 78; });
  Outcome o;
  o.pass = grid.size() == 1092 && ids.size() == 1092 && full && all_gold;
  o.detail = "records=" + std::to_string(grid.size()) + " distinct=" + std::to_string(ids.size());
  return o;
}

// ---- 4 ------------------------------------------------------------------

Outcome metric_oracle() {
  util::SplitMix64 rng(4004);
  double worst = 0.0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t k = 1 + rng.below(kNumEmotions);
    std::vector<Emotion> classes(kAllEmotions.begin(), kAllEmotions.end());
    util::shuffle(classes.begin(), classes.end(), rng);
    classes.resize(k);
    const std::size_t n = 20 + rng.below(181);
    std::vector<Emotion> gold, pred;
    std::vector<evaluation::LabelPair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      const Emotion g = classes[rng.below(k)];
      // Bias towards correct predictions so scores spread over [0, 1].
      const Emotion p = rng.uniform(0.0, 1.0) < 0.5 ? g : classes[rng.below(k)];
      gold.push_back(g);
      pred.push_back(p);
      pairs.push_back({g, p});
    }
    const auto r = evaluation::evaluate(pairs);
    const auto ref = testing::oracle_scores(gold, pred);
    worst = std::max({worst, std::abs(r.wacc_percent / 100.0 - ref.wacc),
                      std::abs(r.macro_f1_percent / 100.0 - ref.macro_f1)});
  }
  return {worst <= kMetricTol, fmt("max_abs_err=%.3g over 100 sets", worst)};
}

// ---- 5 ------------------------------------------------------------------

using Hand = std::array<features::Point2, features::kKeypointsPerHand>;

Hand random_valid_hand(util::SplitMix64& rng) {
  Hand h{};
  for (;;) {
    for (auto& p : h) p = {rng.uniform(50, 600), rng.uniform(50, 450)};
    const double bone = std::hypot(h[features::kMiddleMcp].x - h[features::kWrist].x,
                                   h[features::kMiddleMcp].y - h[features::kWrist].y);
    if (bone > 40.0) return h;
  }
}

features::HandKeypoints as_keypoints(const Hand& left, const Hand& right) {
  features::HandKeypoints k;
  for (std::size_t i = 0; i < features::kKeypointsPerHand; ++i) {
    k.points[i] = left[i];
    k.points[features::kKeypointsPerHand + i] = right[i];
  }
  k.valid_left = k.valid_right = true;
  return k;
}

Outcome canonical_invariance() {
  util::SplitMix64 rng(5005);
  double worst = 0.0, wrist = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Hand h = random_valid_hand(rng);
    const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double scale = rng.uniform(0.25, 4.0);
    const double tx = rng.uniform(-300, 300), ty = rng.uniform(-300, 300);
    Hand moved = h;
    for (auto& p : moved) {
      const double x = p.x, y = p.y;
      p = {scale * (std::cos(angle) * x - std::sin(angle) * y) + tx,
           scale * (std::sin(angle) * x + std::cos(angle) * y) + ty};
    }
    const auto a = features::canonicalize_hands(as_keypoints(h, moved));
    const auto b = features::canonicalize_hands(as_keypoints(moved, h));
    if (!a.valid_left || !a.valid_right) return {false, "valid hand flagged invalid"};
    for (std::size_t i = 0; i < features::kHandDim; ++i) {
      worst = std::max(worst, static_cast<double>(std::abs(a.vector[i] - b.vector[i])));
    }
    // Left vs right halves of one output compare the original and moved hand.
    for (std::size_t i = 0; i < 2 * features::kKeypointsPerHand; ++i) {
      worst = std::max(worst, static_cast<double>(
                                  std::abs(a.vector[i] - a.vector[2 * features::kKeypointsPerHand + i])));
    }
    wrist = std::max({wrist, std::abs(static_cast<double>(a.vector[0])),
                      std::abs(static_cast<double>(a.vector[1]))});
  }
  // Degenerate hands: every point on the wrist, or the reference bone collapsed.
  bool degenerate_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    Hand flat{};
    const features::Point2 w{rng.uniform(0, 600), rng.uniform(0, 400)};
    flat.fill(w);
    Hand collapsed = random_valid_hand(rng);
    collapsed[features::kMiddleMcp] = collapsed[features::kWrist];
    for (const Hand& bad : {flat, collapsed}) {
      const auto out = features::canonicalize_hands(as_keypoints(bad, bad));
      degenerate_ok = degenerate_ok && !out.valid_left && !out.valid_right &&
                      std::all_of(out.vector.begin(), out.vector.end(), [](float v) { return v == 0.0f; });
    }
  }
  Outcome o;
  o.pass = worst <= kCanonTol && wrist == 0.0 && degenerate_ok;
  o.detail = fmt("max_diff=%.3g wrist_max=%.3g", worst, wrist) +
             (degenerate_ok ? " degenerate=zeros" : " degenerate=BAD");
  return o;
}

// ---- 6 ------------------------------------------------------------------

Outcome segment_exhaustive() {
  using features::SegmentKind;
  std::size_t checked = 0;
  for (double fps : {24.0, 25.0, 30.0}) {
    const auto w = static_cast<std::size_t>(std::floor(2.0 * fps));
    if (features::window_frames(2.0, fps) != w) return {false, fmt("window(fps=%g) wrong", fps)};
    for (std::size_t n = 1; n <= 400; ++n) {
      const auto full = features::select_segment(n, fps, {SegmentKind::kFull, 2.0, {}});
      const auto post = features::select_segment(n, fps, {SegmentKind::kPost2s, 2.0, {}});
      const features::FrameRange whole{0, n};
      if (full != whole) return {false, fmt("full n=%g fps=%g", n, fps)};
      const features::FrameRange want_post = n > w ? features::FrameRange{n - w, n} : whole;
      if (post != want_post) return {false, fmt("post n=%g fps=%g", n, fps)};
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const features::SegmentStrategy s{SegmentKind::kRandom2s, 2.0, seed * 7919 + n};
        const auto r = features::select_segment(n, fps, s);
        if (r != features::select_segment(n, fps, s)) return {false, fmt("random not deterministic n=%g", n)};
        if (n <= w ? r != whole : (r.size() != w || r.end > n)) {
          return {false, fmt("random bounds n=%g fps=%g", n, fps)};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " random draws, 1200 full/post cases"};
}

// ---- 7 ------------------------------------------------------------------

Outcome fusion_slices() {
  static_assert(features::kFaceDim == 512 && features::kHandDim == 84 && features::kFusedDim == 596);
  util::SplitMix64 rng(7007);
  for (int trial = 0; trial < 1000; ++trial) {
    features::FaceEmbedding f;
    f.valid = true;
    for (auto& v : f.vector) v = static_cast<float>(rng.normal());
    features::CanonicalHandFeature h;
    h.valid_left = h.valid_right = true;
    for (auto& v : h.vector) v = static_cast<float>(rng.normal());
    const auto fused = features::fuse(f, h);
    const auto fs = features::face_slice(std::span<const float, features::kFusedDim>(fused));
    const auto hs = features::hand_slice(std::span<const float, features::kFusedDim>(fused));
    if (!std::equal(fs.begin(), fs.end(), f.vector.begin()) ||
        !std::equal(hs.begin(), hs.end(), h.vector.begin())) {
      return {false, "slice mismatch at trial " + std::to_string(trial)};
    }
  }
  return {true, "1000 pairs exact; dims 512+84=596"};
}

// ---- 8 ------------------------------------------------------------------

Outcome gradient_check() {
  model::ModelConfig c;
  c.input_dim = 8;
  c.hidden1 = 4;
  c.hidden2 = 3;
  util::SplitMix64 rng(8008);
  auto net = model::Network::initialize(c, 8);
  for (auto& w : net.parameters().blob()) w += 0.3 * rng.normal();
  double worst_head = 0.0, worst_all = 0.0;
  const std::size_t head_begin = net.parameters().size() - kNumEmotions * (c.hidden2 + 1);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> v(c.input_dim * 6);
    for (auto& x : v) x = rng.normal();
    const auto in = model::InputSequence::dense(c.input_dim, std::move(v));
    const Emotion target = emotion_from_index(rng.below(kNumEmotions));
    model::Parameters grad(c);
    grad.zero();
    net.accumulate_gradient(in, target, 1.0, grad);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double fd = testing::finite_difference(net, in, target, i);
      const double a = grad.blob()[i];
      const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8});
      worst_all = std::max(worst_all, rel);
      if (i >= head_begin) worst_head = std::max(worst_head, rel);
    }
  }
  return {worst_head <= kGradTol && worst_all <= kGradTol,
          fmt("head_rel=%.3g all_rel=%.3g params=%g", worst_head, worst_all,
              static_cast<double>(net.parameters().size()))};
}

// ---- 9 ------------------------------------------------------------------

model::ModelConfig smoke_config(std::size_t dim) {
  model::ModelConfig c;
  c.input_dim = dim;
  c.hidden1 = 24;
  c.hidden2 = 12;
  return c;
}

Outcome training_smoke() {
  testing::SyntheticSetOptions opt;
  opt.dim = 16;
  opt.per_class = 40;
  opt.frames = 8;
  opt.noise = 1.0;
  opt.signal = 0.3;
  const auto all = testing::synthetic_sequences(opt, 9009);
  std::vector<model::TrainingExample> train, held;
  for (std::size_t i = 0; i < all.size(); ++i) (i % 4 == 3 ? held : train).push_back(all[i]);

  model::TrainHyper h;
  h.epochs = kMaxEpochs;
  h.lr = 1e-2;
  h.seed = 9;
  auto net = model::Network::initialize(smoke_config(opt.dim), h.seed);
  std::size_t reached = 0;
  model::train_network(net, train, h, [&](const model::EpochStats& s) {
    if (!reached && model::accuracy(net, train) >= kTrainAccMin) reached = s.epoch;
  });
  const double train_acc = model::accuracy(net, train);

  // Control: identical inputs with their labels permuted, scored against the
  // true labels of held-out clips.
  auto shuffled = train;
  std::vector<Emotion> labels;
  for (const auto& ex : shuffled) labels.push_back(ex.label);
  util::SplitMix64 srng(99);
  util::shuffle(labels.begin(), labels.end(), srng);
  for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].label = labels[i];
  auto control = model::Network::initialize(smoke_config(opt.dim), h.seed);
  model::train_network(control, shuffled, h);
  const double control_acc = model::accuracy(control, held);
  const double chance = 1.0 / static_cast<double>(kNumEmotions);

  Outcome o;
  o.pass = train_acc >= kTrainAccMin && reached > 0 && reached <= kMaxEpochs &&
           std::abs(control_acc - chance) <= kChanceBand;
  o.detail = fmt("train_acc=%.3f reached@epoch=%g held_out_acc=%.3f control_acc=%.3f",
                 train_acc, static_cast<double>(reached), model::accuracy(net, held), control_acc);
  return o;
}

// ---- 10 -----------------------------------------------------------------

// Mean minority recall on a balanced held-out set after training on a 90%
// neutral set, with and without inverse-frequency class weights.
std::pair<double, double> minority_recall(std::uint64_t data_seed, std::uint64_t train_seed,
                                          double* neutral_share) {
  constexpr std::size_t kMinority = 4, kNeutral = 216, kHeld = 100;
  testing::SyntheticSetOptions opt;
  opt.dim = 16;
  opt.frames = 6;
  opt.noise = 1.0;
  opt.signal = 0.3;
  opt.counts.assign(kNumEmotions, kMinority + kHeld);
  opt.counts[index_of(Emotion::kNeutral)] = kNeutral + kHeld;
  const auto all = testing::synthetic_sequences(opt, data_seed);
  std::vector<model::TrainingExample> train, held;
  std::map<Emotion, std::size_t> seen;
  for (const auto& ex : all) (seen[ex.label]++ < kHeld ? held : train).push_back(ex);
  if (neutral_share) {
    std::size_t n = 0;
    for (const auto& ex : train) n += ex.label == Emotion::kNeutral;
    *neutral_share = static_cast<double>(n) / static_cast<double>(train.size());
  }

  model::TrainHyper h;
  h.epochs = 10;
  h.lr = 1e-2;
  h.seed = train_seed;
  auto run = [&](bool weighted) {
    model::TrainHyper hh = h;
    if (weighted) hh.class_weights = model::inverse_frequency_weights(train);
    auto net = model::Network::initialize(smoke_config(opt.dim), h.seed);
    model::train_network(net, train, hh);
    PerEmotion<std::size_t> hit{}, n{};
    for (const auto& ex : held) {
      ++n[index_of(ex.label)];
      hit[index_of(ex.label)] += argmax(net.forward(ex.input)) == ex.label;
    }
    double sum = 0;
    for (Emotion e : kAllEmotions) {
      if (e == Emotion::kNeutral) continue;
      sum += static_cast<double>(hit[index_of(e)]) / static_cast<double>(n[index_of(e)]);
    }
    return sum / (kNumEmotions - 1);
  };
  return {run(false), run(true)};
}

Outcome imbalance_direction() {
  double share = 0.0;
  const auto [unweighted, weighted] = minority_recall(1010, 10, &share);
  // Informational: the same comparison on further seeds.
  int wins = 0;
  for (std::uint64_t k = 1; k <= 4; ++k) {
    const auto [u, w] = minority_recall(1010 + k, 10 + k, nullptr);
    wins += w > u;
  }
  return {weighted > unweighted && share >= 0.9,
          fmt("neutral_share=%.3f minority_recall unweighted=%.3f weighted=%.3f", share, unweighted,
              weighted) +
              " (other seeds: " + std::to_string(wins) + "/4 higher)"};
}

// ---- 11 -----------------------------------------------------------------

// Runs the whole weak-label pipeline inside `dir` with relative paths only.
std::string pipeline_run(const fs::path& dir) {
  fs::create_directories(dir);
  const auto prev = fs::current_path();
  fs::current_path(dir);
  const std::vector<std::vector<std::string>> steps = {
      {"synth-fixtures", "--out", "fx"},
      {"weak-label", "--manifest", "fx/weak.jsonl", "--model-id", "lexicon-v1", "--out", "weak.labeled.jsonl"},
      {"extract-features", "--manifest", "weak.labeled.jsonl", "--out", "feat_weak", "--segment", "random2s"},
      {"extract-features", "--manifest", "fx/eval.jsonl", "--out", "feat_eval", "--segment", "random2s"},
      {"finetune", "--base", "fx/base.ckpt", "--manifest", "weak.labeled.jsonl", "--features",
       "feat_weak", "--out", "finetuned.ckpt", "--epochs", "5", "--lr", "1e-3"},
      {"predict", "--checkpoint", "finetuned.ckpt", "--manifest", "fx/eval.jsonl", "--features",
       "feat_eval", "--out", "pred.jsonl"},
      {"evaluate", "--gold", "fx/eval.jsonl", "--pred", "pred.jsonl", "--out", "eval.json"},
  };
  std::string failure;
  for (const auto& step : steps) {
    std::vector<std::string> args = {"signemo", "--seed", "11", "--log-level", "warn"};
    args.insert(args.end(), step.begin(), step.end());
    std::ostringstream out, err;
    if (cli::run(args, out, err) != cli::kExitOk) {
      failure = step[0] + ": " + err.str();
      break;
    }
  }
  fs::current_path(prev);
  return failure;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = util::read_file(e.path());
  }
  return files;
}

Outcome pipeline_determinism() {
  const auto root = testing::temp_dir("acceptance_e2e");
  for (const char* run : {"run1", "run2"}) {
    if (const auto err = pipeline_run(root / run); !err.empty()) return {false, err};
  }
  const auto a = snapshot(root / "run1");
  const auto b = snapshot(root / "run2");
  std::vector<std::string> differing;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) differing.push_back(name);
  }
  const auto eval = nlohmann::json::parse(a.at("eval.json"));
  Outcome o;
  o.pass = differing.empty() && a.size() == b.size();
  o.detail = std::to_string(a.size()) + " files identical; eval wAcc=" +
             fmt("%.1f", eval.at("metrics").at("wacc_percent").get<double>()) + " macroF1=" +
             fmt("%.1f", eval.at("metrics").at("macro_f1_percent").get<double>());
  if (!differing.empty()) o.detail = "differs: " + differing.front();
  return o;
}

// ---- 12 -----------------------------------------------------------------

Outcome ac1_properties() {
  util::SplitMix64 rng(1212);
  double perm_err = 0.0, ident_err = 0.0, oracle_err = 0.0;
  for (int pair = 0; pair < 200; ++pair) {
    const std::size_t n = 10 + rng.below(300);
    std::vector<Emotion> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(emotion_from_index(rng.below(kNumEmotions)));
      b.push_back(rng.uniform(0.0, 1.0) < 0.6 ? a.back() : emotion_from_index(rng.below(kNumEmotions)));
    }
    const auto r = evaluation::gwet_ac1(a, b);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    util::shuffle(order.begin(), order.end(), rng);
    std::vector<Emotion> pa, pb;
    for (auto i : order) {
      pa.push_back(a[i]);
      pb.push_back(b[i]);
    }
    perm_err = std::max({perm_err, std::abs(evaluation::gwet_ac1(pa, pb).ac1 - r.ac1),
                         std::abs(evaluation::gwet_ac1(b, a).ac1 - r.ac1)});
    // Identical lists need p_e < 1, which holds unless a single class covers everything.
    const auto same = evaluation::gwet_ac1(a, a);
    ident_err = std::max(ident_err, std::abs(same.ac1 - 1.0));
    oracle_err = std::max(oracle_err, std::abs(r.ac1 - testing::oracle_ac1(a, b).ac1));
  }
  // p_o = p_e gives zero, both through the closed form and on constructed lists.
  double zero_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double p = rng.uniform(0.0, 0.95);
    zero_err = std::max(zero_err, std::abs(evaluation::ac1_from_agreements(p, p)));
  }
  // Constructed lists with p_o = p_e = 1/12: two evenly used classes over 24
  // items with exactly one agreement on each.
  std::vector<Emotion> za, zb;
  for (int i = 0; i < 24; ++i) {
    const bool first_half = i < 12;
    za.push_back(first_half ? Emotion::kJoy : Emotion::kFear);
    const bool agree = i == 0 || i == 12;
    zb.push_back(agree == first_half ? Emotion::kJoy : Emotion::kFear);
  }
  const auto zr = evaluation::gwet_ac1(za, zb);
  zero_err = std::max({zero_err, std::abs(zr.ac1), std::abs(zr.p_o - zr.p_e)});
  const bool pass = perm_err <= 1e-12 && ident_err <= 1e-12 && zero_err <= 1e-12 && oracle_err <= 1e-12;
  return {pass, fmt("perm=%.2g identical=%.2g zero=%.2g oracle=%.2g", perm_err, ident_err,
                    zero_err, oracle_err)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "AC1 arithmetic", 1, ac1_arithmetic},
      {2, "EmoSign mapping", 1, emosign_mapping},
      {3, "acted grid shape", 1, acted_grid},
      {4, "metric oracle equivalence", 10, metric_oracle},
      {5, "hand canonicalization invariance", 10, canonical_invariance},
      {6, "segment selection", 5, segment_exhaustive},
      {7, "fusion slicing", 5, fusion_slices},
      {8, "gradient check", 30, gradient_check},
      {9, "training smoke", 300, training_smoke},
      {10, "imbalance direction", 300, imbalance_direction},
      {11, "end-to-end determinism", 600, pipeline_determinism},
      {12, "AC1 properties", 10, ac1_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_s;
    const bool pass = o.pass && in_budget;
    failed += !pass;
    std::printf("AC%02d %s %-34s %s [%.2fs/%gs%s]\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs, c.budget_s, in_budget ? "" : " over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
