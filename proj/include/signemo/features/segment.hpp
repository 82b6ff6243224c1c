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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace signemo::features {

enum class SegmentKind { kFull, kRandom2s, kPost2s };

std::string_view to_string(SegmentKind kind);
/// Accepts "full", "random2s"/"random_2s", "post2s"/"post_2s".
SegmentKind parse_segment_kind(std::string_view s);

struct SegmentStrategy {
  SegmentKind kind = SegmentKind::kFull;
  double window_s = 2.0;
  /// Required for kRandom2s.
  std::optional<std::uint64_t> seed;
};

struct FrameRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const FrameRange&) const = default;
};

/// Window length in frames: floor(window_s * fps), at least 1.
std::size_t window_frames(double window_s, double fps);

/// Frame range used for a clip of n_frames. Clips no longer than the window
/// are used whole under every strategy.
FrameRange select_segment(std::size_t n_frames, double fps, const SegmentStrategy& strategy);

}  // namespace signemo::features
