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

#include "signemo/cli/fixtures.hpp"

#include <cstdio>

#include "signemo/corpus/manifest.hpp"
#include "signemo/error.hpp"
#include "signemo/features/extract.hpp"
#include "signemo/model/checkpoint.hpp"
#include "signemo/model/pipeline.hpp"
#include "signemo/util/io.hpp"
#include "signemo/util/random.hpp"
#include "signemo/weak/weak_labeler.hpp"

namespace signemo::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Sentences with no lexicon cue words.
constexpr std::array<std::string_view, 10> kNeutralSentences = {
    "the bus leaves the station at nine",
    "we are painting the kitchen this week",
    "the train to the coast runs every hour",
    "they planted potatoes along the north field",
    "the meeting has moved to the second floor",
    "he keeps the tools in the shed by the gate",
    "the shop opens early on market days",
    "she walked the dog along the river path",
    "the report covers the last three months",
    "our neighbours bought a new blue car",
};

constexpr std::array<std::string_view, 5> kFrames = {
    "honestly it was {} when the results came in",
    "everyone said the match felt {} from the start",
    "i was {} to hear about the old bridge",
    "that evening at the farm was {}",
    "it is {} what happened in the village",
};

std::string subtitle_for(Emotion e, util::SplitMix64& rng) {
  if (e == Emotion::kNeutral) return std::string(kNeutralSentences[rng.below(kNeutralSentences.size())]);
  const auto& cues = weak::LexiconClassifier::lexicon()[index_of(e)];
  const std::string cue = cues[rng.below(cues.size())];
  std::string frame(kFrames[rng.below(kFrames.size())]);
  frame.replace(frame.find("{}"), 2, cue);
  return frame;
}

Emotion other_than(Emotion e, util::SplitMix64& rng) {
  const auto k = rng.below(kNumEmotions - 1);
  return emotion_from_index(k >= index_of(e) ? k + 1 : k);
}

corpus::ClipRecord make_clip(const std::string& id, const std::string& signer,
                             std::optional<Emotion> video_emotion, const SynthOptions& o,
                             std::uint64_t seed, double start_s, double dropout = 0.0) {
  // Weak per-clip signal keeps the synthetic task from being trivially separable.
  const double signal = 0.04 + 0.12 * static_cast<double>(seed >> 11) * 0x1.0p-53;
  corpus::ClipRecord r;
  r.clip_id = id;
  r.signer_id = signer;
  r.fps = o.fps;
  r.start_s = start_s;
  r.end_s = start_s + static_cast<double>(o.frames) / o.fps;
  r.video_path = features::synthetic_video_path(id, video_emotion, o.frames, seed, dropout, signal);
  return r;
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

corpus::Manifest with_split(std::vector<corpus::ClipRecord> records, corpus::SplitName split) {
  corpus::Manifest m;
  corpus::DatasetSplit s{split, {}};
  for (const auto& r : records) s.clip_ids.push_back(r.clip_id);
  m.records = std::move(records);
  m.splits.push_back(std::move(s));
  return m;
}

}  // namespace

ordered_json write_synth_fixtures(const fs::path& out_dir, const SynthOptions& o) {
  if (o.frames == 0 || o.fps <= 0.0) throw ValidationError("synth-fixtures: frames and fps must be positive");
  fs::create_directories(out_dir);
  util::SplitMix64 rng(util::mix_seed(o.seed, "synth-fixtures"));

  // Acted set: every class for every signer, gold labels.
  std::vector<corpus::ClipRecord> acted;
  std::size_t n = 0;
  for (std::size_t rep = 0; rep < o.acted_per_class; ++rep) {
    for (Emotion e : kAllEmotions) {
      auto r = make_clip(numbered("acted_", n), rep % 2 ? "signer_b" : "signer_a", e, o, rng(),
                         static_cast<double>(n) * 4.0);
      r.labels.push_back({e, corpus::LabelProvenance::gold()});
      acted.push_back(std::move(r));
      ++n;
    }
  }

  // Broadcast-style set: subtitles carry the (noisy) emotion cue.
  std::vector<corpus::ClipRecord> weak_set;
  n = 0;
  for (Emotion e : kAllEmotions) {
    const std::size_t count = e == Emotion::kNeutral ? 2 * o.weak_per_class : o.weak_per_class;
    for (std::size_t i = 0; i < count; ++i) {
      auto r = make_clip(numbered("bc_", n), "interp_" + std::to_string(rng.below(4)), e, o, rng(),
                         static_cast<double>(n) * 4.0, n % 9 == 4 ? 0.1 : 0.0);
      const Emotion cue = rng.uniform01() < o.weak_noise ? other_than(e, rng) : e;
      if (n % 13 != 7) r.subtitle_text = subtitle_for(cue, rng);
      weak_set.push_back(std::move(r));
      ++n;
    }
  }
  // Interleave classes so manifest order (and annotation context) is mixed.
  util::shuffle(weak_set.begin(), weak_set.end(), rng);

  // Evaluation set with consensus labels.
  std::vector<corpus::ClipRecord> eval;
  n = 0;
  for (std::size_t rep = 0; rep < o.eval_per_class; ++rep) {
    for (Emotion e : kAllEmotions) {
      auto r = make_clip(numbered("ev_", n), "interp_eval", e, o, rng(), static_cast<double>(n) * 4.0);
      r.subtitle_text = subtitle_for(e, rng);
      r.labels.push_back({e, corpus::LabelProvenance::consensus()});
      eval.push_back(std::move(r));
      ++n;
    }
  }

  // LLM replies: mostly labels in assorted formatting, plus unparsable and
  // failing clips so every outcome is exercised.
  ordered_json clips = ordered_json::object();
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const auto& r = eval[i];
    const Emotion gold = r.labels.front().label;
    if (i % 9 == 4) {
      clips[r.clip_id] = {"It could be several things.", "Hard to say from these frames."};
    } else if (i % 11 == 6) {
      clips[r.clip_id] = ordered_json::array({{{"error", "HTTP 503: upstream overloaded"}}});
    } else {
      const Emotion said = rng.uniform01() < 0.6 ? gold : other_than(gold, rng);
      std::string text(to_string(said));
      switch (i % 3) {
        case 0: text[0] = static_cast<char>(text[0] - 'a' + 'A'); break;
        case 1: text += "."; break;
        default: text = "\"" + text + "\""; break;
      }
      clips[r.clip_id] = {text};
    }
  }
  const ordered_json mock{{"clips", clips}, {"default", {"neutral"}}};

  const auto acted_m = with_split(acted, corpus::SplitName::kTrain);
  const auto weak_m = with_split(weak_set, corpus::SplitName::kTrain);
  const auto eval_m = with_split(eval, corpus::SplitName::kEval);
  corpus::save_manifest(out_dir / "acted.jsonl", acted_m);
  corpus::save_manifest(out_dir / "weak.jsonl", weak_m);
  corpus::save_manifest(out_dir / "eval.jsonl", eval_m);
  util::write_file_atomic(out_dir / "llm_mock.json", mock.dump(2) + "\n");

  // Base model: pre-trained on the acted clips with the stub extractors.
  const fs::path acted_features = out_dir / "acted_features";
  features::SyntheticFrameSource source;
  features::ProjectionFaceEmbedder face;
  features::SyntheticHandDetector hands;
  features::extract_manifest(acted, source, face, hands, acted_features,
                             {features::SegmentKind::kFull, o.seed, 2.0, o.jobs});
  model::ModelConfig cfg;
  cfg.hidden1 = o.hidden1;
  cfg.hidden2 = o.hidden2;
  model::TrainHyper hyper;
  hyper.seed = o.seed;
  hyper.epochs = o.base_epochs;
  hyper.lr = o.base_lr;
  const auto base = model::train(acted, acted_features, cfg, hyper, "acted.jsonl");
  model::save_checkpoint(out_dir / "base.ckpt", base);

  ordered_json summary;
  summary["seed"] = o.seed;
  summary["acted"] = {{"manifest", "acted.jsonl"}, {"records", acted.size()}};
  summary["weak"] = {{"manifest", "weak.jsonl"}, {"records", weak_set.size()}};
  summary["eval"] = {{"manifest", "eval.jsonl"}, {"records", eval.size()}};
  summary["llm_mock"] = "llm_mock.json";
  summary["base_checkpoint"] = {{"path", "base.ckpt"},
                                {"config", model::to_json(base.config)},
                                {"epochs", base.training_meta.epochs}};
  util::write_file_atomic(out_dir / "fixtures.json", summary.dump(2) + "\n");
  return summary;
}

}  // namespace signemo::cli
