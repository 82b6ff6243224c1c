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
#include <vector>

#include "signemo/emotion.hpp"

namespace signemo {

/// A per-clip class distribution and its argmax label.
struct Prediction {
  std::string clip_id;
  EmotionDistribution distribution{};
  Emotion label = Emotion::kNeutral;

  /// Validates the distribution and sets label = argmax.
  static Prediction from_distribution(std::string clip_id, const EmotionDistribution& dist);

  bool operator==(const Prediction&) const = default;
};

/// Line-delimited: {"clip_id", "label", "distribution": {"anger": p, ...}}.
std::string serialize_predictions(const std::vector<Prediction>& predictions);
void save_predictions(const std::filesystem::path& path,
                      const std::vector<Prediction>& predictions);
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

}  // namespace signemo
