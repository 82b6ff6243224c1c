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

#include "signemo/emotion.hpp"

#include <cmath>

#include "signemo/error.hpp"
#include "signemo/util/strings.hpp"

namespace signemo {
namespace {

constexpr std::array<std::string_view, kNumEmotions> kNames = {
    "anger", "disgust", "fear", "joy", "neutral", "sadness", "surprise"};

}  // namespace

Emotion emotion_from_index(std::size_t i) {
  if (i >= kNumEmotions) {
    throw ValidationError("emotion index out of range: " + std::to_string(i));
  }
  return static_cast<Emotion>(i);
}

std::string_view to_string(Emotion e) { return kNames[index_of(e)]; }

Emotion parse_emotion(std::string_view s) {
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    if (kNames[i] == s) return static_cast<Emotion>(i);
  }
  throw ValidationError("unknown emotion label '" + std::string(s) +
                        "' (expected one of " + known_emotion_names() + ")");
}

std::optional<Emotion> try_parse_emotion_relaxed(std::string_view s) {
  const std::string key = util::to_lower(util::trim(s));
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    if (kNames[i] == key) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

Emotion argmax(const EmotionDistribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumEmotions; ++i) {
    if (dist[i] > dist[best]) best = i;
  }
  return static_cast<Emotion>(best);
}

bool is_distribution(const EmotionDistribution& dist, double tol) {
  double sum = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

EmotionDistribution one_hot(Emotion e) {
  EmotionDistribution d{};
  d[index_of(e)] = 1.0;
  return d;
}

std::string known_emotion_names() {
  std::string out;
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    if (i) out += ", ";
    out += kNames[i];
  }
  return out;
}

}  // namespace signemo
