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

#include <thread>

#include "httplib.h"
#include "signemo/error.hpp"
#include "signemo/weak/weak_labeler.hpp"

namespace signemo::weak {
namespace {

std::vector<corpus::ClipRecord> records(std::size_t n, const char* subtitle = "some words") {
  std::vector<corpus::ClipRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    corpus::ClipRecord r;
    r.clip_id = "c" + std::to_string(i);
    r.video_path = "v";
    r.signer_id = "s";
    r.end_s = 1;
    if (subtitle) r.subtitle_text = subtitle;
    out.push_back(r);
  }
  return out;
}

TEST(WeakLabel, OneHotStubLabelsEveryRecord) {
  const auto res = weak_label(records(5), ConstantClassifier::one_hot(Emotion::kJoy));
  ASSERT_EQ(res.records.size(), 5u);
  for (const auto& r : res.records) {
    const auto* l = r.find_label(corpus::LabelSource::kTerWeak);
    ASSERT_NE(l, nullptr);
    EXPECT_EQ(l->label, Emotion::kJoy);
    EXPECT_DOUBLE_EQ(*l->provenance.confidence, 1.0);
  }
  ClassCounts expect{};
  expect[index_of(Emotion::kJoy)] = 5;
  EXPECT_EQ(res.run.class_counts, expect);
  EXPECT_EQ(res.run.records_labeled, 5u);
}

TEST(WeakLabel, MissingOrBlankSubtitleIsSkipped) {
  auto recs = records(3);
  recs[1].subtitle_text.reset();
  recs[2].subtitle_text = "   ";
  const auto res = weak_label(recs, ConstantClassifier::one_hot(Emotion::kFear));
  EXPECT_EQ(res.run.records_labeled, 1u);
  EXPECT_EQ(res.run.skipped_no_subtitle, 2u);
  EXPECT_EQ(res.records[1].labels.size(), 0u);
}

TEST(WeakLabel, UniformTieGoesToFirstLabelInFixedOrder) {
  // Enumerate: every class has the same probability, so the lowest index wins.
  const auto res = weak_label(records(1), ConstantClassifier::uniform());
  EXPECT_EQ(res.records[0].labels.at(0).label, kAllEmotions.front());
  EXPECT_EQ(kAllEmotions.front(), Emotion::kAnger);
  EXPECT_EQ(to_string(kAllEmotions.front()), "anger");
}

TEST(WeakLabel, OtherProvenanceIsNeverTouched) {
  auto recs = records(2);
  recs[0].set_label({Emotion::kSadness, corpus::LabelProvenance::gold()});
  recs[0].set_label({Emotion::kAnger, corpus::LabelProvenance::annotator("a")});
  recs[1].set_label({Emotion::kFear, corpus::LabelProvenance::weak(0.2)});
  const auto res = weak_label(recs, ConstantClassifier::one_hot(Emotion::kJoy));
  EXPECT_EQ(res.records[0].find_label(corpus::LabelSource::kGoldActed)->label, Emotion::kSadness);
  EXPECT_EQ(res.records[0].find_label(corpus::LabelSource::kAnnotator, std::string("a"))->label,
            Emotion::kAnger);
  EXPECT_EQ(res.records[1].labels.size(), 1u);
  EXPECT_EQ(res.records[1].labels[0].label, Emotion::kJoy);
}

TEST(WeakLabel, MinConfidenceFilters) {
  WeakLabelOptions opt;
  opt.min_confidence = 0.5;
  const auto res = weak_label(records(4), ConstantClassifier::uniform(), opt);
  EXPECT_EQ(res.run.records_labeled, 0u);
  EXPECT_EQ(res.run.skipped_low_confidence, 4u);
}

class Throwing final : public TextEmotionClassifier {
 public:
  EmotionDistribution classify(std::string_view text) const override {
    if (text == "bad") throw Error("classifier", "boom");
    return one_hot(Emotion::kSurprise);
  }
  std::string model_id() const override { return "throwing"; }
  bool concurrent_safe() const override { return false; }
};

TEST(WeakLabel, FailuresAreReportedAndTotalFailureThrows) {
  auto recs = records(3);
  recs[1].subtitle_text = "bad";
  WeakLabelOptions opt;
  opt.jobs = 3;
  const auto res = weak_label(recs, Throwing{}, opt);
  EXPECT_EQ(res.run.failed, 1u);
  ASSERT_EQ(res.run.failures.size(), 1u);
  EXPECT_EQ(res.run.failures[0].clip_id, "c1");
  EXPECT_EQ(res.run.skipped(), 1u);
  EXPECT_THROW(weak_label(records(2, "bad"), Throwing{}), Error);
}

TEST(WeakLabel, ParallelRunsMatchSerial) {
  auto recs = records(40);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].subtitle_text = i % 2 ? "i am so happy and delighted" : "that was terrifying";
  }
  LexiconClassifier lex;
  WeakLabelOptions par;
  par.jobs = 4;
  EXPECT_EQ(weak_label(recs, lex).records, weak_label(recs, lex, par).records);
}

TEST(Lexicon, CueWordsAndNeutralDefault) {
  LexiconClassifier lex;
  EXPECT_EQ(argmax(lex.classify("I was absolutely furious and angry")), Emotion::kAnger);
  EXPECT_EQ(argmax(lex.classify("the bus leaves at nine")), Emotion::kNeutral);
  EXPECT_TRUE(is_distribution(lex.classify("WOW, unbelievable!")));
  EXPECT_EQ(argmax(lex.classify("WOW, unbelievable!")), Emotion::kSurprise);
}

TEST(ClassifierFactory, KnownIdsAndErrors) {
  EXPECT_EQ(make_classifier("lexicon-v1")->model_id(), "lexicon-v1");
  EXPECT_EQ(argmax(make_classifier("constant:fear")->classify("x")), Emotion::kFear);
  EXPECT_THROW(make_classifier("constant:meh"), Error);
  EXPECT_THROW(make_classifier("bert-large"), Error);
}

TEST(HttpClassifier, ParsesBothResponseShapes) {
  const auto a = parse_classifier_response(R"([{"label":"JOY","score":0.7},{"label":"sadness","score":0.3}])");
  EXPECT_NEAR(a[index_of(Emotion::kJoy)], 0.7, 1e-12);
  const auto b = parse_classifier_response(R"([[{"label":"anger","score":2},{"label":"fear","score":2}]])");
  EXPECT_NEAR(b[index_of(Emotion::kAnger)], 0.5, 1e-12);
  EXPECT_THROW(parse_classifier_response(R"({"oops":1})"), Error);
  EXPECT_THROW(parse_classifier_response(R"([{"label":"contempt","score":1}])"), Error);
}

TEST(HttpClassifier, TalksToALocalEndpoint) {
  httplib::Server srv;
  srv.Post("/classify", [](const httplib::Request& req, httplib::Response& res) {
    const auto j = nlohmann::json::parse(req.body);
    const bool sad = j.at("inputs").get<std::string>().find("sad") != std::string::npos;
    res.set_content(sad ? R"([{"label":"sadness","score":0.9},{"label":"neutral","score":0.1}])"
                        : R"([{"label":"neutral","score":1.0}])",
                    "application/json");
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  const auto clf = make_classifier("http://127.0.0.1:" + std::to_string(port) + "/classify");
  EXPECT_EQ(argmax(clf->classify("so sad")), Emotion::kSadness);
  EXPECT_EQ(argmax(clf->classify("fine")), Emotion::kNeutral);
  srv.stop();
  t.join();
  EXPECT_THROW(clf->classify("server gone"), Error);
}

}  // namespace
}  // namespace signemo::weak
