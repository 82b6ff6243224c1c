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

#pragma once

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

namespace signemo::cli {

/// Knobs for the synthetic corpus used by examples and acceptance runs.
struct SynthOptions {
  std::uint64_t seed = 0;
  /// Weak-label (broadcast-style) clips per emotion; neutral gets twice as many.
  std::size_t weak_per_class = 8;
  std::size_t eval_per_class = 4;
  std::size_t acted_per_class = 6;
  std::size_t frames = 36;
  double fps = 12.0;
  /// Fraction of weak clips whose subtitle cue disagrees with the video.
  double weak_noise = 0.15;
  /// Base checkpoint shape and pre-training budget (on the acted set).
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 16;
  std::size_t base_epochs = 3;
  double base_lr = 1e-3;
  std::size_t jobs = 1;
};

/// Writes into `out_dir`:
///   acted.jsonl (+ splits)      acted clips with gold_acted labels
///   weak.jsonl (+ splits)       unlabeled clips with emotion-bearing subtitles
///   eval.jsonl (+ splits)       held-out clips with consensus labels
///   llm_mock.json               recorded replies for the LLM baseline
///   base.ckpt                   model pre-trained on the acted clips
///   fixtures.json               summary of the above
/// Returns the summary.
nlohmann::ordered_json write_synth_fixtures(const std::filesystem::path& out_dir,
                                            const SynthOptions& options);

}  // namespace signemo::cli
