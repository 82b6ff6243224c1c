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

#include <optional>
#include <string>
#include <vector>

#include "signemo/emotion.hpp"

namespace signemo::corpus {

enum class LabelSource {
  kGoldActed,
  kTerWeak,
  kAnnotator,
  kConsensus,
  kModelPrediction,
};

std::string_view to_string(LabelSource s);
LabelSource parse_label_source(std::string_view s);

/// Where a label came from. `annotator_id` is set iff the source is an
/// annotator; `confidence` is set iff the source is automatic (weak or model).
struct LabelProvenance {
  LabelSource source = LabelSource::kGoldActed;
  std::optional<std::string> annotator_id;
  std::optional<double> confidence;

  static LabelProvenance gold() { return {LabelSource::kGoldActed, {}, {}}; }
  static LabelProvenance consensus() { return {LabelSource::kConsensus, {}, {}}; }
  static LabelProvenance annotator(std::string id) {
    return {LabelSource::kAnnotator, std::move(id), {}};
  }
  static LabelProvenance weak(double confidence) {
    return {LabelSource::kTerWeak, {}, confidence};
  }
  static LabelProvenance prediction(double confidence) {
    return {LabelSource::kModelPrediction, {}, confidence};
  }

  bool operator==(const LabelProvenance&) const = default;
};

struct ClipLabel {
  Emotion label = Emotion::kNeutral;
  LabelProvenance provenance;

  bool operator==(const ClipLabel&) const = default;
};

struct ClipRecord {
  std::string clip_id;
  std::string video_path;
  std::string signer_id;
  std::optional<std::string> subtitle_text;
  double start_s = 0.0;
  double end_s = 0.0;
  double fps = 25.0;
  std::vector<ClipLabel> labels;
  /// Category name from an external taxonomy, kept verbatim for mapping.
  std::optional<std::string> external_label;

  double duration() const { return end_s - start_s; }

  bool operator==(const ClipRecord&) const = default;

  /// Label with the given provenance key, if present.
  const ClipLabel* find_label(LabelSource source,
                              const std::optional<std::string>& annotator_id = {}) const;

  /// Inserts `label`, replacing any label with the same (source, annotator_id).
  void set_label(ClipLabel label);
};

enum class SplitName { kTrain, kHeldOut, kEval };

std::string_view to_string(SplitName s);
SplitName parse_split_name(std::string_view s);

struct DatasetSplit {
  SplitName name = SplitName::kTrain;
  std::vector<std::string> clip_ids;

  bool operator==(const DatasetSplit&) const = default;
};

/// Throws ValidationError naming the clip and offending field.
void validate(const ClipRecord& record);
void validate(const LabelProvenance& provenance, const std::string& clip_id);

/// Trust order used when a clip carries several label layers:
/// consensus > annotator > gold_acted > ter_weak. Model predictions are never
/// used as targets.
inline constexpr std::array<LabelSource, 4> kDefaultLabelPriority = {
    LabelSource::kConsensus, LabelSource::kAnnotator, LabelSource::kGoldActed,
    LabelSource::kTerWeak};

/// First label in priority order. When several annotator labels exist and no
/// consensus, the label is only resolved if the annotators agree.
std::optional<Emotion> resolve_label(
    const ClipRecord& record,
    std::span<const LabelSource> priority = kDefaultLabelPriority);

}  // namespace signemo::corpus
