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

#include "signemo/corpus/manifest.hpp"

#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "signemo/error.hpp"
#include "signemo/util/io.hpp"

namespace signemo::corpus {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return j.at(key).get<T>();
}

}  // namespace

const ClipRecord* Manifest::find(std::string_view clip_id) const {
  for (const auto& r : records) {
    if (r.clip_id == clip_id) return &r;
  }
  return nullptr;
}

std::vector<ClipRecord> Manifest::split_records(SplitName split) const {
  std::unordered_set<std::string> ids;
  for (const auto& s : splits) {
    if (s.name == split) ids.insert(s.clip_ids.begin(), s.clip_ids.end());
  }
  std::vector<ClipRecord> out;
  for (const auto& r : records) {
    if (ids.count(r.clip_id)) out.push_back(r);
  }
  return out;
}

ordered_json to_json(const ClipRecord& r) {
  ordered_json j;
  j["clip_id"] = r.clip_id;
  j["video_path"] = r.video_path;
  j["signer_id"] = r.signer_id;
  if (r.subtitle_text) j["subtitle_text"] = *r.subtitle_text;
  j["start_s"] = r.start_s;
  j["end_s"] = r.end_s;
  j["fps"] = r.fps;
  ordered_json labels = ordered_json::array();
  for (const auto& l : r.labels) {
    ordered_json lj;
    lj["label"] = std::string(to_string(l.label));
    lj["source"] = std::string(to_string(l.provenance.source));
    if (l.provenance.annotator_id) lj["annotator_id"] = *l.provenance.annotator_id;
    if (l.provenance.confidence) lj["confidence"] = *l.provenance.confidence;
    labels.push_back(std::move(lj));
  }
  j["labels"] = std::move(labels);
  if (r.external_label) j["external_label"] = *r.external_label;
  return j;
}

ClipRecord record_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  ClipRecord r;
  r.clip_id = required<std::string>(j, "clip_id");
  try {
    r.video_path = required<std::string>(j, "video_path");
    r.signer_id = required<std::string>(j, "signer_id");
    if (j.contains("subtitle_text") && !j["subtitle_text"].is_null()) {
      r.subtitle_text = j["subtitle_text"].get<std::string>();
    }
    r.start_s = required<double>(j, "start_s");
    r.end_s = required<double>(j, "end_s");
    r.fps = required<double>(j, "fps");
    if (j.contains("labels")) {
      for (const auto& lj : j.at("labels")) {
        ClipLabel l;
        l.label = parse_emotion(required<std::string>(lj, "label"));
        l.provenance.source = parse_label_source(required<std::string>(lj, "source"));
        if (lj.contains("annotator_id") && !lj["annotator_id"].is_null()) {
          l.provenance.annotator_id = lj["annotator_id"].get<std::string>();
        }
        if (lj.contains("confidence") && !lj["confidence"].is_null()) {
          l.provenance.confidence = lj["confidence"].get<double>();
        }
        r.labels.push_back(std::move(l));
      }
    }
    if (j.contains("external_label") && !j["external_label"].is_null()) {
      r.external_label = j["external_label"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ValidationError("clip '" + r.clip_id + "': " + e.what());
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("clip '", 0) == 0) throw;
    throw ValidationError("clip '" + r.clip_id + "': " + what);
  }
  validate(r);
  return r;
}

ordered_json to_json(const DatasetSplit& s) {
  ordered_json j;
  j["name"] = std::string(to_string(s.name));
  j["clip_ids"] = s.clip_ids;
  return j;
}

DatasetSplit split_from_json(const json& j) {
  DatasetSplit s;
  s.name = parse_split_name(required<std::string>(j, "name"));
  s.clip_ids = required<std::vector<std::string>>(j, "clip_ids");
  return s;
}

fs::path default_split_path(const fs::path& manifest) {
  fs::path p = manifest;
  p.replace_extension(".splits.jsonl");
  return p;
}

std::vector<ClipRecord> parse_records(std::string_view text, const std::string& source) {
  std::vector<ClipRecord> records;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos
                                                                             : end - pos);
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, e.what());
    }
    ClipRecord r;
    try {
      r = record_from_json(j);
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!seen.insert(r.clip_id).second) {
      throw ParseError(source, line_no, "clip '" + r.clip_id + "': duplicate clip_id");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<DatasetSplit> load_splits(const fs::path& path) {
  std::vector<DatasetSplit> splits;
  util::for_each_line(path, [&](std::string_view line, std::size_t n) {
    try {
      splits.push_back(split_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(path.string(), n, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), n, e.what());
    }
  });
  return splits;
}

void validate_manifest(const Manifest& m) {
  std::unordered_set<std::string> ids;
  for (const auto& r : m.records) {
    validate(r);
    if (!ids.insert(r.clip_id).second) {
      throw ValidationError("clip '" + r.clip_id + "': duplicate clip_id");
    }
  }
  std::unordered_map<std::string, std::string> owner;
  for (const auto& s : m.splits) {
    const std::string name(to_string(s.name));
    for (const auto& id : s.clip_ids) {
      if (!ids.count(id)) {
        throw ValidationError("split '" + name + "' references unknown clip '" + id + "'");
      }
      auto [it, inserted] = owner.emplace(id, name);
      if (!inserted) {
        throw ValidationError("clip '" + id + "' appears in splits '" + it->second + "' and '" +
                              name + "'");
      }
    }
  }
}

Manifest load_manifest(const fs::path& path, std::optional<fs::path> splits_path) {
  Manifest m;
  m.records = parse_records(util::read_file(path), path.string());
  if (!splits_path) {
    const auto candidate = default_split_path(path);
    if (fs::exists(candidate) && candidate != path) splits_path = candidate;
  }
  if (splits_path) m.splits = load_splits(*splits_path);
  validate_manifest(m);
  return m;
}

std::string serialize_records(const std::vector<ClipRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

void save_records(const fs::path& path, const std::vector<ClipRecord>& records) {
  util::write_file_atomic(path, serialize_records(records));
}

void save_splits(const fs::path& path, const std::vector<DatasetSplit>& splits) {
  std::string out;
  for (const auto& s : splits) {
    out += to_json(s).dump();
    out += '\n';
  }
  util::write_file_atomic(path, out);
}

void save_manifest(const fs::path& path, const Manifest& m) {
  validate_manifest(m);
  save_records(path, m.records);
  if (!m.splits.empty()) save_splits(default_split_path(path), m.splits);
}

}  // namespace signemo::corpus
