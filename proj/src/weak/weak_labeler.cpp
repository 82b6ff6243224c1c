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

#include "signemo/weak/weak_labeler.hpp"

#include <cctype>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "signemo/error.hpp"
#include "signemo/util/strings.hpp"

namespace signemo::weak {

ConstantClassifier::ConstantClassifier(EmotionDistribution dist, std::string id)
    : dist_(dist), id_(std::move(id)) {
  if (!is_distribution(dist_)) throw ValidationError("constant classifier: not a distribution");
}

ConstantClassifier ConstantClassifier::one_hot(Emotion e) {
  return ConstantClassifier(signemo::one_hot(e), "constant:" + std::string(to_string(e)));
}

ConstantClassifier ConstantClassifier::uniform() {
  EmotionDistribution d;
  d.fill(1.0 / static_cast<double>(kNumEmotions));
  return ConstantClassifier(d, "uniform");
}

LexiconClassifier::LexiconClassifier() = default;

const PerEmotion<std::vector<std::string>>& LexiconClassifier::lexicon() {
  static const PerEmotion<std::vector<std::string>> kLexicon = {{
      /* anger */ {"angry", "furious", "rage", "hate", "damn", "outrageous", "careless", "mad",
                   "annoyed", "livid"},
      /* disgust */ {"disgusting", "revolting", "gross", "horrible", "vile", "nasty", "sickening",
                     "filthy", "yuck"},
      /* fear */ {"scared", "afraid", "terrified", "terrifying", "nightmare", "frightened",
                  "panic", "worried", "dangerous", "fear"},
      /* joy */ {"happy", "wonderful", "great", "cheering", "love", "delighted", "lovely",
                 "fantastic", "brilliant", "celebrate"},
      /* neutral */ {},
      /* sadness */ {"sad", "regret", "killed", "hopeless", "lonely", "miss", "crying", "grief",
                     "sorry", "down"},
      /* surprise */ {"wow", "unbelievable", "shock", "amazing", "suddenly", "believe",
                      "unexpected", "astonishing", "incredible"},
  }};
  return kLexicon;
}

EmotionDistribution LexiconClassifier::classify(std::string_view text) const {
  PerEmotion<double> score{};
  score.fill(0.05);
  score[index_of(Emotion::kNeutral)] = 1.0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    for (std::size_t k = 0; k < kNumEmotions; ++k) {
      for (const auto& cue : lexicon()[k]) {
        if (word == cue) score[k] += 1.0;
      }
    }
    word.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '\'') {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  double sum = 0.0;
  for (double s : score) sum += s;
  for (auto& s : score) s /= sum;
  return score;
}

HttpClassifier::HttpClassifier(std::string url, double timeout_s)
    : url_(std::move(url)), timeout_s_(timeout_s) {}

EmotionDistribution parse_classifier_response(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error("classifier_response", std::string("unparsable classifier response: ") + e.what());
  }
  if (j.is_array() && !j.empty() && j.front().is_array()) j = j.front();
  if (!j.is_array()) throw Error("classifier_response", "classifier response is not a list");
  EmotionDistribution d{};
  for (const auto& item : j) {
    const auto label = try_parse_emotion_relaxed(item.at("label").get<std::string>());
    if (!label) continue;
    d[index_of(*label)] += item.at("score").get<double>();
  }
  double sum = 0.0;
  for (double p : d) sum += p;
  if (!(sum > 0.0)) throw Error("classifier_response", "classifier returned no known labels");
  for (auto& p : d) p /= sum;
  return d;
}

EmotionDistribution HttpClassifier::classify(std::string_view text) const {
  const auto scheme_end = url_.find("://");
  const auto path_begin = url_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string host = url_.substr(0, path_begin);
  const std::string path = path_begin == std::string::npos ? "/" : url_.substr(path_begin);
  httplib::Client client(host);
  const auto secs = static_cast<time_t>(timeout_s_);
  client.set_read_timeout(secs, 0);
  client.set_connection_timeout(secs, 0);
  const nlohmann::json body = {{"inputs", std::string(text)}};
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw Error("classifier_transport", "request to " + url_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error("classifier_transport", "classifier returned HTTP " + std::to_string(res->status));
  }
  return parse_classifier_response(res->body);
}

std::unique_ptr<TextEmotionClassifier> make_classifier(const std::string& id) {
  if (id == "lexicon-v1" || id == "lexicon") return std::make_unique<LexiconClassifier>();
  if (id == "uniform") return std::make_unique<ConstantClassifier>(ConstantClassifier::uniform());
  if (id.rfind("constant:", 0) == 0) {
    return std::make_unique<ConstantClassifier>(ConstantClassifier::one_hot(parse_emotion(id.substr(9))));
  }
  if (id.rfind("http://", 0) == 0 || id.rfind("https://", 0) == 0) {
    return std::make_unique<HttpClassifier>(id);
  }
  throw ValidationError("unknown text classifier '" + id +
                        "' (expected lexicon-v1, uniform, constant:<label>, or an http(s) URL)");
}

nlohmann::ordered_json to_json(const WeakLabelRun& run) {
  nlohmann::ordered_json j;
  j["model_id"] = run.model_id;
  j["input_records"] = run.input_records;
  j["records_labeled"] = run.records_labeled;
  nlohmann::ordered_json counts;
  for (Emotion e : kAllEmotions) counts[std::string(to_string(e))] = run.class_counts[index_of(e)];
  j["class_counts"] = std::move(counts);
  j["skipped"] = run.skipped();
  j["skipped_no_subtitle"] = run.skipped_no_subtitle;
  j["skipped_low_confidence"] = run.skipped_low_confidence;
  j["failed"] = run.failed;
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : run.failures) {
    j["failures"].push_back({{"clip_id", f.clip_id}, {"error", f.error}});
  }
  j["manifest_out"] = run.manifest_out;
  return j;
}

namespace {

enum class Outcome { kLabeled, kNoSubtitle, kLowConfidence, kFailed };

struct Slot {
  Outcome outcome = Outcome::kNoSubtitle;
  Emotion label = Emotion::kNeutral;
  double confidence = 0.0;
  std::string error;
};

bool has_text(const corpus::ClipRecord& r) {
  return r.subtitle_text && !util::trim(*r.subtitle_text).empty();
}

}  // namespace

WeakLabelResult weak_label(const std::vector<corpus::ClipRecord>& records,
                           const TextEmotionClassifier& clf, const WeakLabelOptions& options) {
  std::vector<Slot> slots(records.size());
  std::mutex serial;
  auto work = [&](std::size_t i) {
    Slot& s = slots[i];
    if (!has_text(records[i])) {
      s.outcome = Outcome::kNoSubtitle;
      return;
    }
    try {
      EmotionDistribution dist;
      if (clf.concurrent_safe()) {
        dist = clf.classify(*records[i].subtitle_text);
      } else {
        std::lock_guard lock(serial);
        dist = clf.classify(*records[i].subtitle_text);
      }
      if (!is_distribution(dist)) throw Error("bad_distribution", "classifier output is not a distribution");
      s.label = argmax(dist);
      s.confidence = dist[index_of(s.label)];
      s.outcome = options.min_confidence && s.confidence < *options.min_confidence
                      ? Outcome::kLowConfidence
                      : Outcome::kLabeled;
    } catch (const std::exception& e) {
      s.outcome = Outcome::kFailed;
      s.error = e.what();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, records.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < records.size(); i += jobs) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  WeakLabelResult out;
  out.records = records;
  out.run.model_id = clf.model_id();
  out.run.input_records = records.size();
  std::size_t attempted = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Slot& s = slots[i];
    switch (s.outcome) {
      case Outcome::kNoSubtitle:
        ++out.run.skipped_no_subtitle;
        break;
      case Outcome::kLowConfidence:
        ++attempted;
        ++out.run.skipped_low_confidence;
        break;
      case Outcome::kFailed:
        ++attempted;
        ++out.run.failed;
        out.run.failures.push_back({records[i].clip_id, s.error});
        break;
      case Outcome::kLabeled:
        ++attempted;
        ++out.run.records_labeled;
        ++out.run.class_counts[index_of(s.label)];
        out.records[i].set_label({s.label, corpus::LabelProvenance::weak(s.confidence)});
        break;
    }
  }
  if (attempted > 0 && out.run.failed == attempted) {
    throw Error("weak_label_failed", "text classifier failed on all " + std::to_string(attempted) +
                                         " records (first: " + out.run.failures.front().clip_id +
                                         ": " + out.run.failures.front().error + ")");
  }
  return out;
}

evaluation::EvaluationReport verify_classifier(const TextEmotionClassifier& clf,
                                               const std::vector<corpus::ClipRecord>& gold) {
  if (gold.empty()) throw ValidationError("verify_classifier: empty gold set");
  std::vector<evaluation::LabelPair> pairs;
  pairs.reserve(gold.size());
  for (const auto& r : gold) {
    const auto* c = r.find_label(corpus::LabelSource::kConsensus);
    if (!c) throw ValidationError("verify_classifier: clip '" + r.clip_id + "' has no consensus label");
    if (!has_text(r)) throw ValidationError("verify_classifier: clip '" + r.clip_id + "' has no subtitle");
    pairs.push_back({c->label, argmax(clf.classify(*r.subtitle_text))});
  }
  return evaluation::evaluate(pairs);
}

}  // namespace signemo::weak
