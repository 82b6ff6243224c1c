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

#include "signemo/model/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signemo/error.hpp"

namespace signemo::model {

void validate(const ModelConfig& c) {
  if (c.input_dim == 0) throw ValidationError("model config: input_dim must be > 0");
  if (c.hidden1 == 0 || c.hidden2 == 0) {
    throw ValidationError("model config: hidden sizes must be > 0");
  }
  if (c.n_classes != kNumEmotions) {
    throw ValidationError("model config: n_classes must be " + std::to_string(kNumEmotions));
  }
  if (c.max_seq_len == 0) throw ValidationError("model config: max_seq_len must be > 0");
  if (c.class_weights) {
    for (double w : *c.class_weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw ValidationError("model config: class weights must be finite and >= 0");
      }
    }
  }
}

nlohmann::ordered_json to_json(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["input_dim"] = c.input_dim;
  j["hidden1"] = c.hidden1;
  j["hidden2"] = c.hidden2;
  j["n_classes"] = c.n_classes;
  j["max_seq_len"] = c.max_seq_len;
  if (c.class_weights) {
    nlohmann::ordered_json w;
    for (Emotion e : kAllEmotions) w[std::string(to_string(e))] = (*c.class_weights)[index_of(e)];
    j["class_weights"] = std::move(w);
  } else {
    j["class_weights"] = nullptr;
  }
  return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.input_dim = j.at("input_dim").get<std::size_t>();
    c.hidden1 = j.at("hidden1").get<std::size_t>();
    c.hidden2 = j.at("hidden2").get<std::size_t>();
    c.n_classes = j.at("n_classes").get<std::size_t>();
    c.max_seq_len = j.at("max_seq_len").get<std::size_t>();
    if (j.contains("class_weights") && !j["class_weights"].is_null()) {
      PerEmotion<double> w{};
      for (Emotion e : kAllEmotions) {
        w[index_of(e)] = j["class_weights"].at(std::string(to_string(e))).get<double>();
      }
      c.class_weights = w;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config: ") + e.what());
  }
  validate(c);
  return c;
}

ParameterLayout::ParameterLayout(const ModelConfig& c) {
  const std::size_t g1 = 4 * c.hidden1;
  const std::size_t g2 = 4 * c.hidden2;
  lstm1_w = 0;
  lstm1_b = lstm1_w + g1 * (c.input_dim + c.hidden1);
  lstm2_w = lstm1_b + g1;
  lstm2_b = lstm2_w + g2 * (c.hidden1 + c.hidden2);
  head_w = lstm2_b + g2;
  head_b = head_w + c.n_classes * c.hidden2;
  total = head_b + c.n_classes;
}

Parameters::Parameters(const ModelConfig& config)
    : layout_(config), values_(layout_.total, 0.0) {}

void Parameters::zero() { std::fill(values_.begin(), values_.end(), 0.0); }

}  // namespace signemo::model
