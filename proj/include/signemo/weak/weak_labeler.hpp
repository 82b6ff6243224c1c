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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/corpus/types.hpp"
#include "signemo/evaluation/metrics.hpp"

namespace signemo::weak {

/// Text emotion recognition model. classify() must return a distribution
/// (non-negative, sums to 1) and be deterministic for a given model id.
class TextEmotionClassifier {
 public:
  virtual ~TextEmotionClassifier() = default;
  virtual EmotionDistribution classify(std::string_view text) const = 0;
  virtual std::string model_id() const = 0;
  /// False if calls must be serialized.
  virtual bool concurrent_safe() const { return true; }
};

/// Same distribution for every input.
class ConstantClassifier final : public TextEmotionClassifier {
 public:
  ConstantClassifier(EmotionDistribution dist, std::string id);
  static ConstantClassifier one_hot(Emotion e);
  static ConstantClassifier uniform();

  EmotionDistribution classify(std::string_view) const override { return dist_; }
  std::string model_id() const override { return id_; }

 private:
  EmotionDistribution dist_;
  std::string id_;
};

/// Keyword-lexicon classifier: counts cue words per class, adds a neutral
/// prior, and normalizes. Deterministic and dependency-free; useful as a
/// weak-label baseline and for fixtures.
class LexiconClassifier final : public TextEmotionClassifier {
 public:
  LexiconClassifier();
  EmotionDistribution classify(std::string_view text) const override;
  std::string model_id() const override { return "lexicon-v1"; }

  /// Cue words per class (lowercase).
  static const PerEmotion<std::vector<std::string>>& lexicon();
};

/// Client for an HTTP text-classification endpoint, e.g. a local server that
/// wraps a pretrained transformer. POSTs {"inputs": text} and accepts either
/// [{"label", "score"}, ...] or [[...]] responses; labels are mapped through
/// case-insensitive class names.
class HttpClassifier final : public TextEmotionClassifier {
 public:
  explicit HttpClassifier(std::string url, double timeout_s = 30.0);
  EmotionDistribution classify(std::string_view text) const override;
  std::string model_id() const override { return "http:" + url_; }
  bool concurrent_safe() const override { return true; }

 private:
  std::string url_;
  double timeout_s_;
};

/// Parses a classifier response body as described for HttpClassifier.
EmotionDistribution parse_classifier_response(std::string_view body);

/// Builds a classifier from a model id: "lexicon-v1", "uniform",
/// "constant:<label>", or "http://..." / "https://...".
std::unique_ptr<TextEmotionClassifier> make_classifier(const std::string& model_id);

struct WeakLabelOptions {
  /// Predictions below this confidence are not accepted. Off by default.
  std::optional<double> min_confidence;
  std::size_t jobs = 1;
};

struct WeakLabelFailure {
  std::string clip_id;
  std::string error;
};

struct WeakLabelRun {
  std::string model_id;
  std::size_t input_records = 0;
  std::size_t records_labeled = 0;
  ClassCounts class_counts{};
  std::size_t skipped_no_subtitle = 0;
  std::size_t skipped_low_confidence = 0;
  std::size_t failed = 0;
  std::vector<WeakLabelFailure> failures;
  std::string manifest_out;

  std::size_t skipped() const { return skipped_no_subtitle + skipped_low_confidence + failed; }
};

nlohmann::ordered_json to_json(const WeakLabelRun& run);

struct WeakLabelResult {
  std::vector<corpus::ClipRecord> records;
  WeakLabelRun run;
};

/// Adds a ter_weak label (argmax, confidence = max probability) to each record
/// with subtitle text. Existing labels of other sources are untouched; a
/// previous ter_weak label is replaced. Records that fail classification keep
/// their labels and are listed in the run. Throws if every attempted record
/// failed.
WeakLabelResult weak_label(const std::vector<corpus::ClipRecord>& records,
                           const TextEmotionClassifier& classifier,
                           const WeakLabelOptions& options = {});

/// Classifier argmax against consensus labels.
evaluation::EvaluationReport verify_classifier(const TextEmotionClassifier& classifier,
                                               const std::vector<corpus::ClipRecord>& gold);

}  // namespace signemo::weak
