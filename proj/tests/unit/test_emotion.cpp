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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "signemo/emotion.hpp"
#include "signemo/error.hpp"

namespace signemo {
namespace {

TEST(Emotion, NamesRoundTripInIndexOrder) {
  const char* names[] = {"anger", "disgust", "fear", "joy", "neutral", "sadness", "surprise"};
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    EXPECT_EQ(to_string(emotion_from_index(i)), names[i]);
    EXPECT_EQ(parse_emotion(names[i]), emotion_from_index(i));
  }
  EXPECT_THROW(emotion_from_index(7), Error);
}

TEST(Emotion, StrictAndRelaxedParsing) {
  EXPECT_THROW(parse_emotion("Joy"), Error);
  EXPECT_THROW(parse_emotion("happiness"), Error);
  EXPECT_EQ(try_parse_emotion_relaxed("  SadNess\n"), Emotion::kSadness);
  EXPECT_EQ(try_parse_emotion_relaxed("contempt"), std::nullopt);
}

TEST(Emotion, ArgmaxTiesGoToLowestIndex) {
  EmotionDistribution d{};
  d.fill(1.0 / 7.0);
  EXPECT_EQ(argmax(d), Emotion::kAnger);
  d = {0.1, 0.1, 0.3, 0.3, 0.1, 0.05, 0.05};
  EXPECT_EQ(argmax(d), Emotion::kFear);
}

TEST(Emotion, DistributionCheck) {
  EXPECT_TRUE(is_distribution(one_hot(Emotion::kJoy)));
  EmotionDistribution d = one_hot(Emotion::kJoy);
  d[0] = -0.0001;
  d[3] = 1.0001;
  EXPECT_FALSE(is_distribution(d));
  d = one_hot(Emotion::kJoy);
  d[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(is_distribution(d));
  d = one_hot(Emotion::kJoy);
  d[2] = 0.01;
  EXPECT_FALSE(is_distribution(d));
}

TEST(Emotion, TableOrderIsAPermutation) {
  PerEmotion<int> seen{};
  for (auto e : kTableOrder) ++seen[index_of(e)];
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_EQ(kTableOrder.front(), Emotion::kJoy);
  EXPECT_EQ(kTableOrder.back(), Emotion::kNeutral);
}

}  // namespace
}  // namespace signemo
