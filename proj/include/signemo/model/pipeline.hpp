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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "signemo/corpus/types.hpp"
#include "signemo/model/checkpoint.hpp"
#include "signemo/prediction.hpp"

namespace signemo::model {

/// Training examples for `records`, labels resolved by `priority`. Throws if a
/// clip has no resolvable label or its feature file is missing.
std::vector<TrainingExample> load_training_set(
    const std::vector<corpus::ClipRecord>& records, const std::filesystem::path& features_dir,
    const ModelConfig& config,
    std::span<const corpus::LabelSource> priority = corpus::kDefaultLabelPriority);

/// Trains a freshly initialized network (seeded by hyper.seed).
ModelCheckpoint train(const std::vector<corpus::ClipRecord>& records,
                      const std::filesystem::path& features_dir, const ModelConfig& config,
                      const TrainHyper& hyper, const std::string& source_manifest = {},
                      const EpochCallback& on_epoch = {});

struct FinetuneOptions {
  Trainable trainable = Trainable::kTemporalAndHead;
  /// Inverse-frequency class weights computed from the fine-tuning labels.
  /// Ignored when hyper.class_weights is set.
  bool auto_class_weights = true;
  std::string base_name;
};

/// Continues training from `base`. The base config must be compatible with
/// the feature files (input_dim 596 or 512).
ModelCheckpoint finetune(const ModelCheckpoint& base,
                         const std::vector<corpus::ClipRecord>& records,
                         const std::filesystem::path& features_dir, const TrainHyper& hyper,
                         const FinetuneOptions& options = {},
                         const std::string& source_manifest = {},
                         const EpochCallback& on_epoch = {});

struct PredictOptions {
  /// Throw on the first missing/unreadable feature file instead of skipping.
  bool fail_fast = false;
  std::size_t jobs = 1;
};

struct SkippedClip {
  std::string clip_id;
  std::string reason;
};

struct PredictRun {
  std::vector<Prediction> predictions;  // manifest order
  std::vector<SkippedClip> skipped;
};

PredictRun predict_manifest(const std::vector<corpus::ClipRecord>& records,
                            const std::filesystem::path& features_dir,
                            const ModelCheckpoint& checkpoint, const PredictOptions& options = {});

}  // namespace signemo::model
