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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/model/network.hpp"

namespace signemo::model {

/// Which parameter groups an optimizer step may change. Face and hand
/// backbones live outside the model, so "temporal and head" is everything.
enum class Trainable { kNone, kHeadOnly, kTemporalAndHead };

std::string_view to_string(Trainable t);

struct TrainHyper {
  double lr = 1e-4;
  std::size_t epochs = 30;
  std::size_t batch = 8;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Global gradient-norm clip; 0 disables.
  double clip_norm = 5.0;
  Trainable trainable = Trainable::kTemporalAndHead;
  /// Overrides ModelConfig::class_weights when set.
  std::optional<PerEmotion<double>> class_weights;
};

struct TrainingExample {
  std::string clip_id;
  InputSequence input;
  Emotion label = Emotion::kNeutral;
};

struct TrainingMeta {
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  std::string source_manifest;
  std::size_t train_clips = 0;
  /// FNV-1a over the ordered training clip ids.
  std::string clip_ids_digest;
  std::string trainable = "temporal_and_head";
  std::optional<std::string> base_checkpoint;
  /// Class-weighted mean loss of each epoch, in order.
  std::vector<double> epoch_losses;

  bool operator==(const TrainingMeta&) const = default;
};

nlohmann::ordered_json to_json(const TrainingMeta& meta);
TrainingMeta meta_from_json(const nlohmann::json& j);

std::string digest_clip_ids(const std::vector<TrainingExample>& examples);

/// Inverse class frequency, normalized to mean 1 over the classes present in
/// `examples`. Absent classes get weight 1.
PerEmotion<double> inverse_frequency_weights(const std::vector<TrainingExample>& examples);

struct EpochStats {
  std::size_t epoch = 0;
  double loss = 0.0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Mini-batch Adam on class-weighted cross-entropy. Per-epoch order is a
/// seeded shuffle; results are deterministic for a fixed seed and kernel ISA.
/// Throws Error("nan_loss") naming the epoch and step on a non-finite loss.
TrainingMeta train_network(Network& network, const std::vector<TrainingExample>& examples,
                           const TrainHyper& hyper, const EpochCallback& on_epoch = {});

/// Argmax predictions for a set of examples.
std::vector<Emotion> predict_labels(const Network& network,
                                    const std::vector<TrainingExample>& examples);

double accuracy(const Network& network, const std::vector<TrainingExample>& examples);

}  // namespace signemo::model
