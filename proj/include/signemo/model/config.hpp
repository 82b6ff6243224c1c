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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/emotion.hpp"

namespace signemo::model {

/// Shape of the temporal classifier: two LSTM layers and a linear softmax head.
struct ModelConfig {
  /// 596 for fused face+hand features, 512 for the face-only variant. Any
  /// other value is allowed for raw (non-feature-file) inputs.
  std::size_t input_dim = 596;
  std::size_t hidden1 = 512;
  std::size_t hidden2 = 256;
  std::size_t n_classes = kNumEmotions;
  std::size_t max_seq_len = 300;
  std::optional<PerEmotion<double>> class_weights;

  bool operator==(const ModelConfig&) const = default;
};

void validate(const ModelConfig& config);

nlohmann::ordered_json to_json(const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::json& j);

/// Offsets of each tensor inside the flat parameter blob.
struct ParameterLayout {
  std::size_t lstm1_w = 0, lstm1_b = 0;
  std::size_t lstm2_w = 0, lstm2_b = 0;
  std::size_t head_w = 0, head_b = 0;
  std::size_t total = 0;

  explicit ParameterLayout(const ModelConfig& config);
  ParameterLayout() = default;

  /// [0, head_w): both recurrent layers.
  std::size_t temporal_end() const { return head_w; }
};

/// Flat, contiguous parameter (or gradient) storage with typed views.
/// LSTM weight matrices are (4H) x (I + H), gate blocks in order i, f, g, o,
/// acting on the concatenation [x_t; h_{t-1}].
class Parameters {
 public:
  Parameters() = default;
  explicit Parameters(const ModelConfig& config);

  const ParameterLayout& layout() const { return layout_; }
  std::span<double> blob() { return values_; }
  std::span<const double> blob() const { return values_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> lstm1_w() { return view(layout_.lstm1_w, layout_.lstm1_b); }
  std::span<double> lstm1_b() { return view(layout_.lstm1_b, layout_.lstm2_w); }
  std::span<double> lstm2_w() { return view(layout_.lstm2_w, layout_.lstm2_b); }
  std::span<double> lstm2_b() { return view(layout_.lstm2_b, layout_.head_w); }
  std::span<double> head_w() { return view(layout_.head_w, layout_.head_b); }
  std::span<double> head_b() { return view(layout_.head_b, layout_.total); }
  std::span<const double> lstm1_w() const { return view(layout_.lstm1_w, layout_.lstm1_b); }
  std::span<const double> lstm1_b() const { return view(layout_.lstm1_b, layout_.lstm2_w); }
  std::span<const double> lstm2_w() const { return view(layout_.lstm2_w, layout_.lstm2_b); }
  std::span<const double> lstm2_b() const { return view(layout_.lstm2_b, layout_.head_w); }
  std::span<const double> head_w() const { return view(layout_.head_w, layout_.head_b); }
  std::span<const double> head_b() const { return view(layout_.head_b, layout_.total); }

  void zero();

  bool operator==(const Parameters& other) const { return values_ == other.values_; }

 private:
  std::span<double> view(std::size_t b, std::size_t e) { return {values_.data() + b, e - b}; }
  std::span<const double> view(std::size_t b, std::size_t e) const {
    return {values_.data() + b, e - b};
  }

  ParameterLayout layout_;
  std::vector<double> values_;
};

}  // namespace signemo::model
