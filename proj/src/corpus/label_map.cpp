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

#include "signemo/corpus/label_map.hpp"

#include <set>

#include "signemo/error.hpp"
#include "signemo/util/strings.hpp"

namespace signemo::corpus {

ExternalLabelMap::ExternalLabelMap(const std::map<std::string, Emotion>& entries) {
  for (const auto& [k, v] : entries) add(k, v);
}

void ExternalLabelMap::add(std::string_view external, Emotion label) {
  entries_[util::to_lower(util::trim(external))] = label;
}

std::optional<Emotion> ExternalLabelMap::find(std::string_view external) const {
  const auto it = entries_.find(util::to_lower(util::trim(external)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string ExternalLabelMap::known_keys() const {
  std::vector<std::string> keys;
  for (const auto& [k, v] : entries_) keys.push_back(k);
  return util::join(keys, ", ");
}

ExternalLabelMap emosign_label_map() {
  return ExternalLabelMap({
      {"happiness", Emotion::kJoy},
      {"happyness", Emotion::kJoy},
      {"sadness", Emotion::kSadness},
      {"frustration", Emotion::kSadness},
      {"anger", Emotion::kAnger},
      {"disgust", Emotion::kDisgust},
      {"fear", Emotion::kFear},
      {"worry", Emotion::kFear},
      {"surprise_pos", Emotion::kSurprise},
      {"surprise_neg", Emotion::kSurprise},
      {"neutral", Emotion::kNeutral},
  });
}

ExternalLabelMap identity_label_map() {
  ExternalLabelMap map;
  for (Emotion e : kAllEmotions) map.add(to_string(e), e);
  return map;
}

Emotion map_external_label(std::string_view external, const ExternalLabelMap& map) {
  if (auto e = map.find(external)) return *e;
  throw ValidationError("unknown external label '" + std::string(external) +
                        "' (known: " + map.known_keys() + ")");
}

ClassCounts mapped_distribution(const std::vector<ClipRecord>& records,
                                const ExternalLabelMap& map) {
  ClassCounts counts{};
  for (const auto& r : records) {
    if (!r.external_label) {
      throw ValidationError("clip '" + r.clip_id + "': field 'external_label' is missing");
    }
    try {
      ++counts[index_of(map_external_label(*r.external_label, map))];
    } catch (const ValidationError& e) {
      throw ValidationError("clip '" + r.clip_id + "': " + e.what());
    }
  }
  return counts;
}

std::vector<ClipRecord> build_acted_grid(const std::vector<std::string>& utterance_ids,
                                         const std::vector<std::string>& signer_ids,
                                         const ActedGridOptions& options) {
  if (utterance_ids.empty()) throw ValidationError("build_acted_grid: no utterance ids");
  if (signer_ids.empty()) throw ValidationError("build_acted_grid: no signer ids");
  if (std::set<std::string>(utterance_ids.begin(), utterance_ids.end()).size() !=
      utterance_ids.size()) {
    throw ValidationError("build_acted_grid: duplicate utterance id");
  }
  if (std::set<std::string>(signer_ids.begin(), signer_ids.end()).size() != signer_ids.size()) {
    throw ValidationError("build_acted_grid: duplicate signer id");
  }
  std::vector<ClipRecord> out;
  out.reserve(utterance_ids.size() * signer_ids.size() * kNumEmotions);
  for (const auto& utt : utterance_ids) {
    for (const auto& signer : signer_ids) {
      for (Emotion e : kAllEmotions) {
        const std::string name(to_string(e));
        ClipRecord r;
        r.clip_id = utt + "_" + signer + "_" + name;
        r.video_path = signer + "/" + utt + "_" + name + ".mp4";
        r.signer_id = signer;
        r.start_s = 0.0;
        r.end_s = options.nominal_duration_s;
        r.fps = options.fps;
        r.labels.push_back({e, LabelProvenance::gold()});
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

}  // namespace signemo::corpus
