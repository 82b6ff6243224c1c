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

// Checkpoint file:
//
//   offset 0   8 bytes  magic "SEMOCKPT"
//   offset 8   u32 LE   header length H
//   offset 12  H bytes  JSON {format_version, config, training_meta, param_count}
//   offset 12+H         param_count float64 LE values (ParameterLayout order)

#include <filesystem>
#include <string>

#include "signemo/model/network.hpp"
#include "signemo/model/trainer.hpp"

namespace signemo::model {

inline constexpr int kCheckpointFormatVersion = 1;

struct ModelCheckpoint {
  ModelConfig config;
  Parameters parameters;
  TrainingMeta training_meta;

  Network network() const { return Network(config, parameters); }
};

ModelCheckpoint make_checkpoint(const Network& network, TrainingMeta meta);

std::string encode_checkpoint(const ModelCheckpoint& ckpt);
ModelCheckpoint decode_checkpoint(std::string_view bytes, const std::string& source = "<memory>");

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt);
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace signemo::model
