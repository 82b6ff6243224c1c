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

#include "signemo/features/segment.hpp"

#include <cmath>
#include <string>

#include "signemo/error.hpp"
#include "signemo/util/random.hpp"

namespace signemo::features {

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::kFull:
      return "full";
    case SegmentKind::kRandom2s:
      return "random2s";
    case SegmentKind::kPost2s:
      return "post2s";
  }
  return "full";
}

SegmentKind parse_segment_kind(std::string_view s) {
  if (s == "full") return SegmentKind::kFull;
  if (s == "random2s" || s == "random_2s") return SegmentKind::kRandom2s;
  if (s == "post2s" || s == "post_2s") return SegmentKind::kPost2s;
  throw ValidationError("unknown segment strategy '" + std::string(s) +
                        "' (expected full, random2s or post2s)");
}

std::size_t window_frames(double window_s, double fps) {
  if (!(window_s > 0.0)) throw ValidationError("segment window must be > 0 seconds");
  if (!(fps > 0.0)) throw ValidationError("fps must be > 0");
  // Products that are integral in exact arithmetic may land just below it.
  const double w = std::floor(window_s * fps + 1e-9);
  return w < 1.0 ? 1 : static_cast<std::size_t>(w);
}

FrameRange select_segment(std::size_t n_frames, double fps, const SegmentStrategy& strategy) {
  if (n_frames < 1) throw ValidationError("select_segment: clip has no frames");
  if (strategy.kind == SegmentKind::kRandom2s && !strategy.seed) {
    throw ValidationError("select_segment: random2s requires a seed");
  }
  const std::size_t w = window_frames(strategy.window_s, fps);
  if (n_frames <= w || strategy.kind == SegmentKind::kFull) return {0, n_frames};
  if (strategy.kind == SegmentKind::kPost2s) return {n_frames - w, n_frames};
  util::SplitMix64 rng(*strategy.seed);
  const std::size_t start = static_cast<std::size_t>(rng.below(n_frames - w + 1));
  return {start, start + w};
}

}  // namespace signemo::features
