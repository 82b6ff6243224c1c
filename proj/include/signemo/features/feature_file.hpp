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

// Per-clip feature file:
//
//   offset 0   8 bytes  magic "SEMOFEAT"
//   offset 8   u32 LE   header length H
//   offset 12  H bytes  JSON header {format_version, clip_id, T, dim, fps,
//                       data_offset, face_mask_offset, hand_mask_offset,
//                       segment{kind, begin, end, source_frames}}
//   offset 12+H         payload: T*dim float32 LE, then T face-mask bytes,
//                       then T hand-mask bytes. Offsets are payload-relative.

#include <filesystem>
#include <string>

#include "signemo/features/extract.hpp"

namespace signemo::features {

inline constexpr int kFeatureFormatVersion = 1;

struct FeatureFile {
  std::string clip_id;
  FrameFeatureSequence sequence;
  SegmentKind segment_kind = SegmentKind::kFull;
  FrameRange segment;
  std::size_t source_frames = 0;
};

std::string encode_feature_file(const FeatureFile& file);
FeatureFile decode_feature_file(std::string_view bytes, const std::string& source = "<memory>");

void write_feature_file(const std::filesystem::path& path, const FeatureFile& file);
FeatureFile read_feature_file(const std::filesystem::path& path);

/// "<dir>/<escaped clip_id>.feat". Characters outside [A-Za-z0-9._-] are
/// percent-encoded.
std::filesystem::path feature_path(const std::filesystem::path& dir, const std::string& clip_id);

}  // namespace signemo::features
