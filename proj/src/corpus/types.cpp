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

#include "signemo/corpus/types.hpp"

#include <algorithm>
#include <cmath>

#include "signemo/error.hpp"

namespace signemo::corpus {
namespace {

constexpr std::array<std::string_view, 5> kSourceNames = {
    "gold_acted", "ter_weak", "annotator", "consensus", "model_prediction"};

constexpr std::array<std::string_view, 3> kSplitNames = {"train", "held_out", "eval"};

[[noreturn]] void fail(const std::string& clip_id, const std::string& field,
                       const std::string& why) {
  throw ValidationError("clip '" + clip_id + "': field '" + field + "' " + why);
}

bool needs_confidence(LabelSource s) {
  return s == LabelSource::kTerWeak || s == LabelSource::kModelPrediction;
}

}  // namespace

std::string_view to_string(LabelSource s) {
  return kSourceNames[static_cast<std::size_t>(s)];
}

LabelSource parse_label_source(std::string_view s) {
  for (std::size_t i = 0; i < kSourceNames.size(); ++i) {
    if (kSourceNames[i] == s) return static_cast<LabelSource>(i);
  }
  throw ValidationError("unknown label source '" + std::string(s) + "'");
}

std::string_view to_string(SplitName s) { return kSplitNames[static_cast<std::size_t>(s)]; }

SplitName parse_split_name(std::string_view s) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
    if (kSplitNames[i] == s) return static_cast<SplitName>(i);
  }
  throw ValidationError("unknown split name '" + std::string(s) +
                        "' (expected train, held_out or eval)");
}

const ClipLabel* ClipRecord::find_label(LabelSource source,
                                        const std::optional<std::string>& annotator_id) const {
  for (const auto& l : labels) {
    if (l.provenance.source == source && l.provenance.annotator_id == annotator_id) return &l;
  }
  return nullptr;
}

void ClipRecord::set_label(ClipLabel label) {
  for (auto& l : labels) {
    if (l.provenance.source == label.provenance.source &&
        l.provenance.annotator_id == label.provenance.annotator_id) {
      l = std::move(label);
      return;
    }
  }
  labels.push_back(std::move(label));
}

void validate(const LabelProvenance& p, const std::string& clip_id) {
  const bool is_annotator = p.source == LabelSource::kAnnotator;
  if (is_annotator && (!p.annotator_id || p.annotator_id->empty())) {
    fail(clip_id, "labels.annotator_id", "is required for source 'annotator'");
  }
  if (!is_annotator && p.annotator_id) {
    fail(clip_id, "labels.annotator_id", "is only allowed for source 'annotator'");
  }
  if (needs_confidence(p.source)) {
    if (!p.confidence) {
      fail(clip_id, "labels.confidence",
           "is required for source '" + std::string(to_string(p.source)) + "'");
    }
    if (!std::isfinite(*p.confidence) || *p.confidence < 0.0 || *p.confidence > 1.0) {
      fail(clip_id, "labels.confidence", "must lie in [0, 1]");
    }
  } else if (p.confidence) {
    fail(clip_id, "labels.confidence",
         "is not allowed for source '" + std::string(to_string(p.source)) + "'");
  }
}

void validate(const ClipRecord& r) {
  if (r.clip_id.empty()) fail(r.clip_id, "clip_id", "must be non-empty");
  if (!std::isfinite(r.start_s) || r.start_s < 0.0) fail(r.clip_id, "start_s", "must be >= 0");
  if (!std::isfinite(r.end_s) || !(r.end_s > r.start_s)) {
    fail(r.clip_id, "end_s", "must be greater than start_s");
  }
  if (!std::isfinite(r.fps) || !(r.fps > 0.0)) fail(r.clip_id, "fps", "must be > 0");
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    validate(r.labels[i].provenance, r.clip_id);
    for (std::size_t j = 0; j < i; ++j) {
      if (r.labels[j].provenance.source == r.labels[i].provenance.source &&
          r.labels[j].provenance.annotator_id == r.labels[i].provenance.annotator_id) {
        fail(r.clip_id, "labels",
             "has more than one label for source '" +
                 std::string(to_string(r.labels[i].provenance.source)) + "'" +
                 (r.labels[i].provenance.annotator_id
                      ? " and annotator '" + *r.labels[i].provenance.annotator_id + "'"
                      : std::string()));
      }
    }
  }
}

std::optional<Emotion> resolve_label(const ClipRecord& record,
                                     std::span<const LabelSource> priority) {
  for (LabelSource source : priority) {
    std::optional<Emotion> found;
    bool conflict = false;
    for (const auto& l : record.labels) {
      if (l.provenance.source != source) continue;
      if (found && *found != l.label) conflict = true;
      found = l.label;
    }
    if (found && !conflict) return found;
  }
  return std::nullopt;
}

}  // namespace signemo::corpus
