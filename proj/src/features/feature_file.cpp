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

#include "signemo/features/feature_file.hpp"

#include <bit>
#include <cctype>
#include <cstring>

#include <nlohmann/json.hpp>

#include "signemo/error.hpp"
#include "signemo/util/io.hpp"

namespace signemo::features {
namespace {

constexpr char kMagic[8] = {'S', 'E', 'M', 'O', 'F', 'E', 'A', 'T'};

static_assert(std::endian::native == std::endian::little,
              "feature files are written in native little-endian layout");

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string encode_feature_file(const FeatureFile& file) {
  const std::size_t t = file.sequence.size();
  const std::size_t data_bytes = t * kFusedDim * sizeof(float);
  nlohmann::ordered_json h;
  h["format_version"] = kFeatureFormatVersion;
  h["clip_id"] = file.clip_id;
  h["T"] = t;
  h["dim"] = kFusedDim;
  h["face_dim"] = kFaceDim;
  h["hand_dim"] = kHandDim;
  h["fps"] = file.sequence.fps();
  h["data_offset"] = 0;
  h["face_mask_offset"] = data_bytes;
  h["hand_mask_offset"] = data_bytes + t;
  h["segment"] = {{"kind", std::string(to_string(file.segment_kind))},
                  {"begin", file.segment.begin},
                  {"end", file.segment.end},
                  {"source_frames", file.source_frames}};
  const std::string header = h.dump();

  std::string out(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  const auto data = file.sequence.data();
  out.append(reinterpret_cast<const char*>(data.data()), data_bytes);
  const auto& fm = file.sequence.face_valid();
  const auto& hm = file.sequence.hand_valid();
  out.append(reinterpret_cast<const char*>(fm.data()), fm.size());
  out.append(reinterpret_cast<const char*>(hm.data()), hm.size());
  return out;
}

FeatureFile decode_feature_file(std::string_view bytes, const std::string& source) {
  auto bad = [&](const std::string& why) {
    return ValidationError("feature file " + source + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw bad("bad magic");
  }
  const std::uint32_t header_len = get_u32(bytes, 8);
  if (bytes.size() < 12 + static_cast<std::size_t>(header_len)) throw bad("truncated header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(12, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw bad(std::string("bad header: ") + e.what());
  }
  FeatureFile file;
  std::size_t t = 0, data_off = 0, face_off = 0, hand_off = 0;
  double fps = 0.0;
  try {
    if (h.at("format_version").get<int>() != kFeatureFormatVersion) {
      throw bad("unsupported format_version " + h.at("format_version").dump());
    }
    if (h.at("dim").get<std::size_t>() != kFusedDim) {
      throw bad("dimension " + h.at("dim").dump() + " != " + std::to_string(kFusedDim));
    }
    file.clip_id = h.at("clip_id").get<std::string>();
    t = h.at("T").get<std::size_t>();
    fps = h.at("fps").get<double>();
    data_off = h.at("data_offset").get<std::size_t>();
    face_off = h.at("face_mask_offset").get<std::size_t>();
    hand_off = h.at("hand_mask_offset").get<std::size_t>();
    const auto& seg = h.at("segment");
    file.segment_kind = parse_segment_kind(seg.at("kind").get<std::string>());
    file.segment = {seg.at("begin").get<std::size_t>(), seg.at("end").get<std::size_t>()};
    file.source_frames = seg.at("source_frames").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw bad(std::string("bad header: ") + e.what());
  }
  const std::string_view payload = bytes.substr(12 + header_len);
  const std::size_t data_bytes = t * kFusedDim * sizeof(float);
  if (data_off + data_bytes > payload.size() || face_off + t > payload.size() ||
      hand_off + t > payload.size()) {
    throw bad("truncated payload");
  }
  FrameFeatureSequence seq(fps);
  FusedFrame frame;
  for (std::size_t i = 0; i < t; ++i) {
    std::memcpy(frame.data(), payload.data() + data_off + i * kFusedDim * sizeof(float),
                kFusedDim * sizeof(float));
    seq.push_back(frame, payload[face_off + i] != 0, payload[hand_off + i] != 0);
  }
  file.sequence = std::move(seq);
  return file;
}

void write_feature_file(const std::filesystem::path& path, const FeatureFile& file) {
  util::write_file_atomic(path, encode_feature_file(file));
}

FeatureFile read_feature_file(const std::filesystem::path& path) {
  return decode_feature_file(util::read_file(path), path.string());
}

std::filesystem::path feature_path(const std::filesystem::path& dir, const std::string& clip_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string name;
  for (unsigned char c : clip_id) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      name.push_back(static_cast<char>(c));
    } else {
      name.push_back('%');
      name.push_back(kHex[c >> 4]);
      name.push_back(kHex[c & 0xf]);
    }
  }
  if (name == "." || name == "..") name = "%2E" + name.substr(1);
  return dir / (name + ".feat");
}

}  // namespace signemo::features
