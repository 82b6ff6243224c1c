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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace signemo {

/// The closed seven-class taxonomy: six basic emotions plus neutral.
///
/// Enumerator values follow alphabetical order of the serialized names. That
/// order is also the tie-break order for every argmax in the project, so the
/// lowest index wins a tie.
enum class Emotion : std::uint8_t {
  kAnger = 0,
  kDisgust = 1,
  kFear = 2,
  kJoy = 3,
  kNeutral = 4,
  kSadness = 5,
  kSurprise = 6,
};

inline constexpr std::size_t kNumEmotions = 7;

inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::kAnger, Emotion::kDisgust, Emotion::kFear,    Emotion::kJoy,
    Emotion::kNeutral, Emotion::kSadness, Emotion::kSurprise};

/// Column order used by the per-class F1 tables (joy first, neutral last).
inline constexpr std::array<Emotion, kNumEmotions> kTableOrder = {
    Emotion::kJoy,  Emotion::kSadness,  Emotion::kAnger,  Emotion::kDisgust,
    Emotion::kFear, Emotion::kSurprise, Emotion::kNeutral};

template <class T>
using PerEmotion = std::array<T, kNumEmotions>;

using ClassCounts = PerEmotion<std::size_t>;

/// Probability distribution over the seven classes, indexed by Emotion.
using EmotionDistribution = PerEmotion<double>;

constexpr std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }

Emotion emotion_from_index(std::size_t i);

/// Lowercase ASCII name ("anger", "joy", ...).
std::string_view to_string(Emotion e);

/// Strict parse of the lowercase serialized form; throws on anything else.
Emotion parse_emotion(std::string_view s);

/// Case-insensitive parse that tolerates surrounding whitespace.
std::optional<Emotion> try_parse_emotion_relaxed(std::string_view s);

/// Index of the maximum entry; ties go to the lowest index.
Emotion argmax(const EmotionDistribution& dist);

/// True when all entries are finite, non-negative and sum to 1 within tol.
bool is_distribution(const EmotionDistribution& dist, double tol = 1e-6);

EmotionDistribution one_hot(Emotion e);

std::string known_emotion_names();

}  // namespace signemo
