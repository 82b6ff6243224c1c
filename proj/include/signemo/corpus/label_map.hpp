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

#include <map>
#include <string>
#include <vector>

#include "signemo/corpus/types.hpp"

namespace signemo::corpus {

/// Many-to-one mapping from an external label vocabulary onto the seven
/// classes. Keys are stored lowercase; lookups are case-insensitive.
class ExternalLabelMap {
 public:
  ExternalLabelMap() = default;
  explicit ExternalLabelMap(const std::map<std::string, Emotion>& entries);

  void add(std::string_view external, Emotion label);
  std::optional<Emotion> find(std::string_view external) const;
  const std::map<std::string, Emotion>& entries() const { return entries_; }
  std::string known_keys() const;

 private:
  std::map<std::string, Emotion> entries_;
};

/// The ten single-expression categories of the EmoSign set, plus the
/// "happyness" spelling used in its published table.
ExternalLabelMap emosign_label_map();

/// Each of the seven class names mapped to itself.
ExternalLabelMap identity_label_map();

/// Throws ValidationError listing the known keys when `external` is unmapped.
Emotion map_external_label(std::string_view external, const ExternalLabelMap& map);

/// Per-class counts after mapping each record's external_label.
ClassCounts mapped_distribution(const std::vector<ClipRecord>& records,
                                const ExternalLabelMap& map);

struct ActedGridOptions {
  double nominal_duration_s = 1.0;
  double fps = 30.0;
};

/// One gold_acted stub per (utterance, signer, emotion) triple, in that
/// nesting order.
std::vector<ClipRecord> build_acted_grid(const std::vector<std::string>& utterance_ids,
                                         const std::vector<std::string>& signer_ids,
                                         const ActedGridOptions& options = {});

}  // namespace signemo::corpus
