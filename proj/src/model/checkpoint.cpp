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

#include "signemo/model/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "signemo/error.hpp"
#include "signemo/util/io.hpp"

namespace signemo::model {
namespace {

constexpr char kMagic[8] = {'S', 'E', 'M', 'O', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little,
              "checkpoints are written in native little-endian layout");

}  // namespace

ModelCheckpoint make_checkpoint(const Network& network, TrainingMeta meta) {
  return {network.config(), network.parameters(), std::move(meta)};
}

std::string encode_checkpoint(const ModelCheckpoint& ckpt) {
  nlohmann::ordered_json h;
  h["format_version"] = kCheckpointFormatVersion;
  h["config"] = to_json(ckpt.config);
  h["training_meta"] = to_json(ckpt.training_meta);
  h["param_count"] = ckpt.parameters.size();
  const std::string header = h.dump();
  std::string out(kMagic, sizeof kMagic);
  const auto len = static_cast<std::uint32_t>(header.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
  out += header;
  const auto blob = ckpt.parameters.blob();
  out.append(reinterpret_cast<const char*>(blob.data()), blob.size() * sizeof(double));
  return out;
}

ModelCheckpoint decode_checkpoint(std::string_view bytes, const std::string& source) {
  auto bad = [&](const std::string& why) {
    return ValidationError("checkpoint " + source + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw bad("bad magic");
  }
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) {
    len |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[8 + i])) << (8 * i);
  }
  if (bytes.size() < 12 + static_cast<std::size_t>(len)) throw bad("truncated header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(12, len));
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  }
  ModelCheckpoint ckpt;
  std::size_t count = 0;
  try {
    if (h.at("format_version").get<int>() != kCheckpointFormatVersion) {
      throw bad("unsupported format_version " + h.at("format_version").dump());
    }
    ckpt.config = config_from_json(h.at("config"));
    ckpt.training_meta = meta_from_json(h.at("training_meta"));
    count = h.at("param_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  }
  ckpt.parameters = Parameters(ckpt.config);
  if (count != ckpt.parameters.size()) {
    throw bad("param_count " + std::to_string(count) + " does not match config shape (" +
              std::to_string(ckpt.parameters.size()) + ")");
  }
  const std::string_view blob = bytes.substr(12 + len);
  if (blob.size() != count * sizeof(double)) throw bad("parameter blob has wrong length");
  std::memcpy(ckpt.parameters.blob().data(), blob.data(), blob.size());
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt) {
  util::write_file_atomic(path, encode_checkpoint(ckpt));
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(util::read_file(path), path.string());
}

}  // namespace signemo::model
