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
#include <vector>

#include "signemo/emotion.hpp"
#include "signemo/features/types.hpp"
#include "signemo/model/config.hpp"

namespace signemo::model {

/// Frames x dim input matrix. Frames with mask 0 are padding: the recurrent
/// state passes through them unchanged, so padding never affects the output.
struct InputSequence {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  std::size_t frames() const { return mask.size(); }
  std::size_t valid_frames() const;
  const double* frame(std::size_t t) const { return values.data() + t * dim; }

  static InputSequence dense(std::size_t dim, std::vector<double> values);
  /// Appends zero frames with mask 0 until `frames()` == total.
  void pad_to(std::size_t total);
};

/// Converts a feature file sequence into model input: keeps the first
/// input_dim columns (596 fused or 512 face-only) and center-truncates to
/// max_seq_len frames.
InputSequence prepare_input(const features::FrameFeatureSequence& sequence,
                            const ModelConfig& config);

/// Range [begin, begin + max_len) kept by center truncation of n frames.
std::pair<std::size_t, std::size_t> center_truncation(std::size_t n, std::size_t max_len);

/// The two-layer LSTM classifier. Classification reads the hidden state of the
/// second layer after the last unmasked frame.
class Network {
 public:
  Network(ModelConfig config, Parameters params);

  /// Deterministic initialization: LSTM weights and biases uniform in
  /// +-1/sqrt(H) with forget-gate bias 1, head uniform in +-1/sqrt(H2).
  static Network initialize(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const Parameters& parameters() const { return params_; }
  Parameters& parameters() { return params_; }

  PerEmotion<double> logits(const InputSequence& input) const;
  EmotionDistribution forward(const InputSequence& input) const;

  /// Adds weight * d(-log p[target]) / d(params) into grad and returns
  /// weight * (-log p[target]).
  double accumulate_gradient(const InputSequence& input, Emotion target, double weight,
                             Parameters& grad) const;

 private:
  void check_input(const InputSequence& input) const;

  ModelConfig config_;
  Parameters params_;
};

EmotionDistribution softmax(const PerEmotion<double>& logits);

}  // namespace signemo::model
