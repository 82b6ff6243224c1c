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

#include "signemo/model/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "signemo/error.hpp"
#include "signemo/kernels/kernels.hpp"
#include "signemo/util/random.hpp"

namespace signemo::model {

std::string_view to_string(Trainable t) {
  switch (t) {
    case Trainable::kNone:
      return "none";
    case Trainable::kHeadOnly:
      return "head_only";
    case Trainable::kTemporalAndHead:
      return "temporal_and_head";
  }
  return "temporal_and_head";
}

nlohmann::ordered_json to_json(const TrainingMeta& m) {
  nlohmann::ordered_json j;
  j["epochs"] = m.epochs;
  j["seed"] = m.seed;
  j["source_manifest"] = m.source_manifest;
  j["train_clips"] = m.train_clips;
  j["clip_ids_digest"] = m.clip_ids_digest;
  j["trainable"] = m.trainable;
  j["base_checkpoint"] = m.base_checkpoint ? nlohmann::ordered_json(*m.base_checkpoint)
                                           : nlohmann::ordered_json(nullptr);
  j["epoch_losses"] = m.epoch_losses;
  return j;
}

TrainingMeta meta_from_json(const nlohmann::json& j) {
  TrainingMeta m;
  try {
    m.epochs = j.at("epochs").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.source_manifest = j.value("source_manifest", "");
    m.train_clips = j.value("train_clips", std::size_t{0});
    m.clip_ids_digest = j.value("clip_ids_digest", "");
    m.trainable = j.value("trainable", "temporal_and_head");
    if (j.contains("base_checkpoint") && !j["base_checkpoint"].is_null()) {
      m.base_checkpoint = j["base_checkpoint"].get<std::string>();
    }
    if (j.contains("epoch_losses")) m.epoch_losses = j["epoch_losses"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("training_meta: ") + e.what());
  }
  return m;
}

std::string digest_clip_ids(const std::vector<TrainingExample>& examples) {
  std::uint64_t h = util::fnv1a64("");
  for (const auto& ex : examples) {
    h = util::fnv1a64(ex.clip_id, h);
    h = util::fnv1a64("\n", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PerEmotion<double> inverse_frequency_weights(const std::vector<TrainingExample>& examples) {
  ClassCounts counts{};
  for (const auto& ex : examples) ++counts[index_of(ex.label)];
  PerEmotion<double> w{};
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    if (counts[k]) {
      w[k] = 1.0 / static_cast<double>(counts[k]);
      sum += w[k];
      ++present;
    }
  }
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    w[k] = counts[k] ? w[k] * static_cast<double>(present) / sum : 1.0;
  }
  return w;
}

TrainingMeta train_network(Network& net, const std::vector<TrainingExample>& examples,
                           const TrainHyper& hyper, const EpochCallback& on_epoch) {
  if (examples.empty()) throw ValidationError("training set is empty");
  if (hyper.batch == 0) throw ValidationError("batch size must be > 0");
  if (!(hyper.lr > 0.0)) throw ValidationError("learning rate must be > 0");

  TrainingMeta meta;
  meta.epochs = hyper.epochs;
  meta.seed = hyper.seed;
  meta.train_clips = examples.size();
  meta.clip_ids_digest = digest_clip_ids(examples);
  meta.trainable = std::string(to_string(hyper.trainable));

  PerEmotion<double> weights;
  weights.fill(1.0);
  if (hyper.class_weights) {
    weights = *hyper.class_weights;
  } else if (net.config().class_weights) {
    weights = *net.config().class_weights;
  }

  Parameters& params = net.parameters();
  const auto& layout = params.layout();
  std::size_t update_begin = layout.total;
  if (hyper.trainable == Trainable::kHeadOnly) update_begin = layout.head_w;
  if (hyper.trainable == Trainable::kTemporalAndHead) update_begin = 0;
  const std::size_t update_n = layout.total - update_begin;

  Parameters grad(net.config());
  std::vector<double> m(layout.total, 0.0), v(layout.total, 0.0);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  util::SplitMix64 rng(util::mix_seed(hyper.seed, "shuffle"));
  const auto& k = kernels::active();
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    util::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    double epoch_weight = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hyper.batch) {
      const std::size_t stop = std::min(order.size(), start + hyper.batch);
      grad.zero();
      double batch_loss = 0.0;
      double batch_weight = 0.0;
      for (std::size_t b = start; b < stop; ++b) {
        const auto& ex = examples[order[b]];
        const double w = weights[index_of(ex.label)];
        if (w == 0.0) continue;
        batch_loss += net.accumulate_gradient(ex.input, ex.label, w, grad);
        batch_weight += w;
      }
      ++step;
      if (!std::isfinite(batch_loss)) {
        throw Error("nan_loss", "non-finite loss at epoch " + std::to_string(epoch + 1) +
                                    ", step " + std::to_string(step));
      }
      epoch_loss += batch_loss;
      epoch_weight += batch_weight;
      if (batch_weight == 0.0 || update_n == 0) continue;

      auto g = grad.blob();
      const double inv = 1.0 / batch_weight;
      double norm2 = 0.0;
      for (std::size_t i = update_begin; i < layout.total; ++i) {
        g[i] *= inv;
        norm2 += g[i] * g[i];
      }
      if (!std::isfinite(norm2)) {
        throw Error("nan_loss", "non-finite gradient at epoch " + std::to_string(epoch + 1) +
                                    ", step " + std::to_string(step));
      }
      if (hyper.clip_norm > 0.0 && norm2 > hyper.clip_norm * hyper.clip_norm) {
        const double s = hyper.clip_norm / std::sqrt(norm2);
        for (std::size_t i = update_begin; i < layout.total; ++i) g[i] *= s;
      }
      const double t = static_cast<double>(step);
      const kernels::AdamStep adam{hyper.lr,
                                   hyper.beta1,
                                   hyper.beta2,
                                   hyper.adam_eps,
                                   1.0 / (1.0 - std::pow(hyper.beta1, t)),
                                   1.0 / (1.0 - std::pow(hyper.beta2, t))};
      k.adam(params.blob().data() + update_begin, g.data() + update_begin,
             m.data() + update_begin, v.data() + update_begin, update_n, adam);
    }
    const double mean_loss = epoch_weight > 0.0 ? epoch_loss / epoch_weight : 0.0;
    meta.epoch_losses.push_back(mean_loss);
    if (on_epoch) on_epoch({epoch + 1, mean_loss});
  }
  return meta;
}

std::vector<Emotion> predict_labels(const Network& net,
                                    const std::vector<TrainingExample>& examples) {
  std::vector<Emotion> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(argmax(net.forward(ex.input)));
  return out;
}

double accuracy(const Network& net, const std::vector<TrainingExample>& examples) {
  if (examples.empty()) return 0.0;
  const auto pred = predict_labels(net, examples);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) hit += pred[i] == examples[i].label;
  return static_cast<double>(hit) / static_cast<double>(examples.size());
}

}  // namespace signemo::model
