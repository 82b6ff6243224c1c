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

#include "../support/oracles.hpp"
#include "signemo/error.hpp"
#include "signemo/evaluation/agreement.hpp"
#include "signemo/evaluation/metrics.hpp"

namespace signemo::evaluation {
namespace {

std::vector<LabelPair> zip(const std::vector<Emotion>& g, const std::vector<Emotion>& p) {
  std::vector<LabelPair> out;
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back({g[i], p[i]});
  return out;
}

TEST(Metrics, IdentityOnAllSevenClasses) {
  std::vector<Emotion> gold(kAllEmotions.begin(), kAllEmotions.end());
  const auto r = evaluate(zip(gold, gold));
  EXPECT_DOUBLE_EQ(r.wacc_percent, 100.0);
  EXPECT_DOUBLE_EQ(r.macro_f1_percent, 100.0);
  EXPECT_EQ(r.classes_present, 7u);
}

TEST(Metrics, TwoClassesWithRecallOneAndHalf) {
  using E = Emotion;
  const auto r = evaluate(zip({E::kJoy, E::kJoy, E::kAnger, E::kAnger},
                              {E::kJoy, E::kJoy, E::kAnger, E::kJoy}));
  EXPECT_NEAR(r.wacc_percent, 75.0, 1e-12);
  EXPECT_EQ(r.classes_present, 2u);
}

TEST(Metrics, ConstantNeutral) {
  std::vector<Emotion> all_neutral(20, Emotion::kNeutral);
  EXPECT_DOUBLE_EQ(evaluate(zip(all_neutral, all_neutral)).wacc_percent, 100.0);
  std::vector<Emotion> balanced;
  for (int k = 0; k < 3; ++k) balanced.insert(balanced.end(), kAllEmotions.begin(), kAllEmotions.end());
  const auto r = evaluate(zip(balanced, std::vector<Emotion>(balanced.size(), Emotion::kNeutral)));
  EXPECT_NEAR(r.wacc_percent, 100.0 / 7.0, 1e-12);
}

TEST(Metrics, MatchesBruteForceOracle) {
  util::SplitMix64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 20 + rng.below(181);
    const auto k = 1 + rng.below(7);
    std::vector<Emotion> g, p;
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(emotion_from_index(rng.below(k)));
      p.push_back(rng.below(3) ? g.back() : emotion_from_index(rng.below(7)));
    }
    const auto r = evaluate(zip(g, p));
    const auto o = testing::oracle_scores(g, p);
    EXPECT_NEAR(r.wacc_percent / 100.0, o.wacc, 1e-9);
    EXPECT_NEAR(r.macro_f1_percent / 100.0, o.macro_f1, 1e-9);
  }
}

TEST(Metrics, EmptyInputThrows) { EXPECT_THROW(evaluate(std::vector<LabelPair>{}), Error); }

TEST(Metrics, TableUsesFixedColumnOrder) {
  std::vector<Emotion> gold(kAllEmotions.begin(), kAllEmotions.end());
  const auto table = format_f1_table({{"model", evaluate(zip(gold, gold))}});
  EXPECT_LT(table.find("Joy"), table.find("Sad"));
  EXPECT_LT(table.find("Sur"), table.find("Neu"));
}

TEST(Agreement, PaperArithmetic) {
  EXPECT_NEAR(ac1_from_agreements(0.6467, 0.0762), 0.6176, 1e-4);
}

TEST(Agreement, IdenticalListsGiveOne) {
  using E = Emotion;
  const std::vector<E> a = {E::kJoy, E::kNeutral, E::kAnger, E::kNeutral};
  const auto r = gwet_ac1(a, a);
  EXPECT_DOUBLE_EQ(r.p_o, 1.0);
  EXPECT_DOUBLE_EQ(r.ac1, 1.0);
}

TEST(Agreement, TwoClassesAtHalfPrevalence) {
  using E = Emotion;
  // Each rater uses joy and anger equally often; agreement 0.5 by construction.
  const std::vector<E> a = {E::kJoy, E::kJoy, E::kAnger, E::kAnger};
  const std::vector<E> b = {E::kJoy, E::kAnger, E::kJoy, E::kAnger};
  const auto r = gwet_ac1(a, b);
  EXPECT_DOUBLE_EQ(r.p_o, 0.5);
  EXPECT_NEAR(r.p_e, (0.25 + 0.25) / 6.0, 1e-15);
  const auto o = testing::oracle_ac1(a, b);
  EXPECT_NEAR(r.ac1, o.ac1, 1e-15);
}

TEST(Agreement, MatchesOracleOnRandomPairs) {
  util::SplitMix64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + rng.below(300);
    std::vector<Emotion> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(emotion_from_index(rng.below(7)));
      b.push_back(rng.below(2) ? a.back() : emotion_from_index(rng.below(7)));
    }
    const auto r = gwet_ac1(a, b);
    const auto o = testing::oracle_ac1(a, b);
    EXPECT_NEAR(r.p_o, o.p_o, 1e-12);
    EXPECT_NEAR(r.p_e, o.p_e, 1e-12);
    EXPECT_NEAR(r.ac1, o.ac1, 1e-12);
    EXPECT_GE(r.ac1, -r.p_e / (1 - r.p_e) - 1e-12);
    EXPECT_LE(r.ac1, 1.0 + 1e-12);
  }
}

TEST(Agreement, InputErrors) {
  EXPECT_THROW(gwet_ac1({}, {}), Error);
  EXPECT_THROW(gwet_ac1({Emotion::kJoy}, {}), Error);
}

corpus::ClipRecord dual(const std::string& id, std::optional<Emotion> a, std::optional<Emotion> b) {
  corpus::ClipRecord r;
  r.clip_id = id;
  if (a) r.set_label({*a, corpus::LabelProvenance::annotator("A")});
  if (b) r.set_label({*b, corpus::LabelProvenance::annotator("B")});
  return r;
}

TEST(Consensus, AgreeingItemsOnly) {
  using E = Emotion;
  const auto res = consensus_subset(
      {dual("0", E::kJoy, E::kJoy), dual("1", E::kNeutral, E::kSadness), dual("2", E::kAnger, E::kAnger)},
      "A", "B");
  ASSERT_EQ(res.records.size(), 2u);
  EXPECT_EQ(res.records[0].clip_id, "0");
  EXPECT_EQ(res.records[1].clip_id, "2");
  EXPECT_EQ(corpus::resolve_label(res.records[1]), E::kAnger);
  EXPECT_NE(res.records[0].find_label(corpus::LabelSource::kConsensus), nullptr);
  EXPECT_EQ(res.agreement.consensus_items, (std::vector<std::size_t>{0, 2}));
}

TEST(Consensus, DisjointAndMissing) {
  using E = Emotion;
  const auto res = consensus_subset(
      {dual("0", E::kJoy, E::kFear), dual("1", E::kNeutral, E::kSadness), dual("2", E::kAnger, std::nullopt)},
      "A", "B");
  EXPECT_TRUE(res.records.empty());
  EXPECT_EQ(res.compared, 2u);
  EXPECT_EQ(res.missing, std::vector<std::string>{"2"});
  EXPECT_DOUBLE_EQ(res.agreement.p_o, 0.0);
}

TEST(Consensus, SizeEqualsObservedAgreementTimesN) {
  util::SplitMix64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<corpus::ClipRecord> recs;
    const auto n = 1 + rng.below(120);
    for (std::size_t i = 0; i < n; ++i) {
      const Emotion a = emotion_from_index(rng.below(7));
      recs.push_back(dual(std::to_string(i), a, rng.below(3) ? a : emotion_from_index(rng.below(7))));
    }
    const auto res = consensus_subset(recs, "A", "B");
    EXPECT_NEAR(static_cast<double>(res.records.size()),
                res.agreement.p_o * static_cast<double>(res.compared), 1e-9);
  }
}

}  // namespace
}  // namespace signemo::evaluation
