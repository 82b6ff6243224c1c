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
#include <string>
#include <vector>

#include "signemo/corpus/types.hpp"

#include <nlohmann/json.hpp>

namespace signemo::corpus {

/// Records plus the optional split definitions that accompany them.
struct Manifest {
  std::vector<ClipRecord> records;
  std::vector<DatasetSplit> splits;

  const ClipRecord* find(std::string_view clip_id) const;
  /// Records belonging to `split`, in manifest order.
  std::vector<ClipRecord> split_records(SplitName split) const;
};

nlohmann::ordered_json to_json(const ClipRecord& record);
ClipRecord record_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const nlohmann::json& j);

/// Split file conventionally stored beside a manifest: "x.jsonl" -> "x.splits.jsonl".
std::filesystem::path default_split_path(const std::filesystem::path& manifest);

/// Loads a line-delimited manifest. Splits are read from `splits_path` when
/// given, else from default_split_path() if that file exists.
Manifest load_manifest(const std::filesystem::path& path,
                       std::optional<std::filesystem::path> splits_path = {});

/// Parses manifest text directly; `source` is used in error messages.
std::vector<ClipRecord> parse_records(std::string_view text,
                                      const std::string& source = "<memory>");

std::vector<DatasetSplit> load_splits(const std::filesystem::path& path);

/// Validates uniqueness of ids, per-record invariants, split disjointness and
/// that every split id refers to a record.
void validate_manifest(const Manifest& manifest);

std::string serialize_records(const std::vector<ClipRecord>& records);

void save_manifest(const std::filesystem::path& path, const Manifest& manifest);
void save_records(const std::filesystem::path& path, const std::vector<ClipRecord>& records);
void save_splits(const std::filesystem::path& path, const std::vector<DatasetSplit>& splits);

}  // namespace signemo::corpus
