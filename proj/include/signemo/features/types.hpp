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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace signemo::features {

inline constexpr std::size_t kFaceDim = 512;
inline constexpr std::size_t kKeypointsPerHand = 21;
inline constexpr std::size_t kHandKeypoints = 2 * kKeypointsPerHand;
inline constexpr std::size_t kHandDim = kHandKeypoints * 2;
inline constexpr std::size_t kFusedDim = kFaceDim + kHandDim;

static_assert(kHandDim == 84);
static_assert(kFusedDim == 596);

/// MediaPipe hand landmark indices used for the canonical frame.
inline constexpr std::size_t kWrist = 0;
inline constexpr std::size_t kMiddleMcp = 9;

struct FaceEmbedding {
  std::array<float, kFaceDim> vector{};
  bool valid = false;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Raw 2D keypoints in image coordinates: left hand at [0, 21), right hand at
/// [21, 42). An invalid hand has all of its points at zero.
struct HandKeypoints {
  std::array<Point2, kHandKeypoints> points{};
  bool valid_left = false;
  bool valid_right = false;
};

/// Flattened (x0, y0, x1, y1, ...) canonical coordinates, left hand first.
struct CanonicalHandFeature {
  std::array<float, kHandDim> vector{};
  bool valid_left = false;
  bool valid_right = false;

  bool any_valid() const { return valid_left || valid_right; }
};

using FusedFrame = std::array<float, kFusedDim>;

/// T frames of fused features stored row-major, with per-frame modality masks.
class FrameFeatureSequence {
 public:
  FrameFeatureSequence() = default;
  explicit FrameFeatureSequence(double fps) : fps_(fps) {}

  void push_back(const FusedFrame& frame, bool face_valid, bool hand_valid);

  std::size_t size() const { return face_valid_.size(); }
  bool empty() const { return face_valid_.empty(); }
  double fps() const { return fps_; }
  void set_fps(double fps) { fps_ = fps; }

  std::span<const float> frame(std::size_t t) const {
    return {data_.data() + t * kFusedDim, kFusedDim};
  }
  std::span<const float> data() const { return data_; }
  const std::vector<std::uint8_t>& face_valid() const { return face_valid_; }
  const std::vector<std::uint8_t>& hand_valid() const { return hand_valid_; }

  /// Frames [begin, end) as a new sequence.
  FrameFeatureSequence slice(std::size_t begin, std::size_t end) const;

  bool operator==(const FrameFeatureSequence&) const = default;

 private:
  std::vector<float> data_;
  std::vector<std::uint8_t> face_valid_;
  std::vector<std::uint8_t> hand_valid_;
  double fps_ = 25.0;
};

/// Decoded frame, 8-bit interleaved RGB.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

}  // namespace signemo::features
