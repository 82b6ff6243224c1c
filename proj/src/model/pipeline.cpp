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

#include "signemo/model/pipeline.hpp"

#include <optional>
#include <thread>

#include "signemo/error.hpp"
#include "signemo/features/feature_file.hpp"

namespace signemo::model {

namespace fs = std::filesystem;

namespace {

InputSequence load_input(const fs::path& features_dir, const std::string& clip_id,
                         const ModelConfig& config) {
  const auto path = features::feature_path(features_dir, clip_id);
  if (!fs::exists(path)) throw IoError("missing feature file for clip '" + clip_id + "': " + path.string());
  const auto file = features::read_feature_file(path);
  if (file.clip_id != clip_id) {
    throw ValidationError("feature file " + path.string() + " belongs to clip '" + file.clip_id +
                          "', expected '" + clip_id + "'");
  }
  return prepare_input(file.sequence, config);
}

}  // namespace

std::vector<TrainingExample> load_training_set(const std::vector<corpus::ClipRecord>& records,
                                               const fs::path& features_dir,
                                               const ModelConfig& config,
                                               std::span<const corpus::LabelSource> priority) {
  std::vector<TrainingExample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const auto label = corpus::resolve_label(r, priority);
    if (!label) throw ValidationError("clip '" + r.clip_id + "' has no usable training label");
    out.push_back({r.clip_id, load_input(features_dir, r.clip_id, config), *label});
  }
  return out;
}

ModelCheckpoint train(const std::vector<corpus::ClipRecord>& records, const fs::path& features_dir,
                      const ModelConfig& config, const TrainHyper& hyper,
                      const std::string& source_manifest, const EpochCallback& on_epoch) {
  validate(config);
  if (records.empty()) throw ValidationError("train: no training clips");
  const auto examples = load_training_set(records, features_dir, config);
  Network net = Network::initialize(config, hyper.seed);
  auto meta = train_network(net, examples, hyper, on_epoch);
  meta.source_manifest = source_manifest;
  return make_checkpoint(net, std::move(meta));
}

ModelCheckpoint finetune(const ModelCheckpoint& base, const std::vector<corpus::ClipRecord>& records,
                         const fs::path& features_dir, const TrainHyper& hyper,
                         const FinetuneOptions& options, const std::string& source_manifest,
                         const EpochCallback& on_epoch) {
  if (base.config.input_dim != features::kFusedDim && base.config.input_dim != features::kFaceDim) {
    throw ValidationError("finetune: base model input_dim " + std::to_string(base.config.input_dim) +
                          " is incompatible with " + std::to_string(features::kFusedDim) +
                          "-d feature files");
  }
  if (records.empty()) throw ValidationError("finetune: no training clips");
  const auto examples = load_training_set(records, features_dir, base.config);
  Network net = base.network();
  TrainHyper h = hyper;
  h.trainable = options.trainable;
  if (!h.class_weights && options.auto_class_weights) {
    h.class_weights = inverse_frequency_weights(examples);
  }
  auto meta = train_network(net, examples, h, on_epoch);
  meta.source_manifest = source_manifest;
  meta.base_checkpoint = options.base_name;
  return make_checkpoint(net, std::move(meta));
}

PredictRun predict_manifest(const std::vector<corpus::ClipRecord>& records,
                            const fs::path& features_dir, const ModelCheckpoint& checkpoint,
                            const PredictOptions& options) {
  const Network net = checkpoint.network();
  std::vector<std::optional<Prediction>> slots(records.size());
  std::vector<std::string> errors(records.size());

  auto work = [&](std::size_t i) {
    try {
      const auto input = load_input(features_dir, records[i].clip_id, net.config());
      slots[i] = Prediction::from_distribution(records[i].clip_id, net.forward(input));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, records.size()));
  if (jobs == 1 || options.fail_fast) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      work(i);
      if (options.fail_fast && !errors[i].empty()) {
        throw Error("missing_features", errors[i]);
      }
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < records.size(); i += jobs) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  PredictRun run;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (slots[i]) {
      run.predictions.push_back(std::move(*slots[i]));
    } else {
      run.skipped.push_back({records[i].clip_id, errors[i]});
    }
  }
  return run;
}

}  // namespace signemo::model
