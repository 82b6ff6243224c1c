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

#include "signemo/features/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "signemo/error.hpp"

namespace signemo::features {
namespace {

// Relative to the farthest keypoint from the wrist.
constexpr double kDegenerateRatio = 1e-9;

bool canonicalize_one(const HandKeypoints& raw, std::size_t hand, float* out) {
  const Point2* p = raw.points.data() + hand * kKeypointsPerHand;
  const Point2 wrist = p[kWrist];
  double spread = 0.0;
  for (std::size_t i = 0; i < kKeypointsPerHand; ++i) {
    if (!std::isfinite(p[i].x) || !std::isfinite(p[i].y)) return false;
    spread = std::max(spread, std::hypot(p[i].x - wrist.x, p[i].y - wrist.y));
  }
  const double bx = p[kMiddleMcp].x - wrist.x;
  const double by = p[kMiddleMcp].y - wrist.y;
  const double len = std::hypot(bx, by);
  if (spread == 0.0 || len <= kDegenerateRatio * spread) return false;

  const double ux = bx / len;
  const double uy = by / len;
  for (std::size_t i = 0; i < kKeypointsPerHand; ++i) {
    const double rx = p[i].x - wrist.x;
    const double ry = p[i].y - wrist.y;
    out[2 * i] = static_cast<float>((uy * rx - ux * ry) / len);
    out[2 * i + 1] = static_cast<float>((ux * rx + uy * ry) / len);
  }
  // The reference points are exact by construction; pin them against rounding.
  out[2 * kWrist] = 0.0f;
  out[2 * kWrist + 1] = 0.0f;
  out[2 * kMiddleMcp] = 0.0f;
  out[2 * kMiddleMcp + 1] = 1.0f;
  return true;
}

void require_zero_if_invalid(const HandKeypoints& raw, std::size_t hand, bool valid) {
  if (valid) return;
  const Point2* p = raw.points.data() + hand * kKeypointsPerHand;
  for (std::size_t i = 0; i < kKeypointsPerHand; ++i) {
    if (p[i].x != 0.0 || p[i].y != 0.0) {
      throw ValidationError(std::string(hand == 0 ? "left" : "right") +
                            " hand is flagged invalid but has non-zero keypoints");
    }
  }
}

}  // namespace

CanonicalHandFeature canonicalize_hands(const HandKeypoints& raw) {
  require_zero_if_invalid(raw, 0, raw.valid_left);
  require_zero_if_invalid(raw, 1, raw.valid_right);
  CanonicalHandFeature out;
  float* left = out.vector.data();
  float* right = out.vector.data() + 2 * kKeypointsPerHand;
  out.valid_left = raw.valid_left && canonicalize_one(raw, 0, left);
  if (!out.valid_left) std::fill(left, left + 2 * kKeypointsPerHand, 0.0f);
  out.valid_right = raw.valid_right && canonicalize_one(raw, 1, right);
  if (!out.valid_right) std::fill(right, right + 2 * kKeypointsPerHand, 0.0f);
  return out;
}

FusedFrame fuse(const FaceEmbedding& face, const CanonicalHandFeature& hand) {
  FusedFrame out;
  std::copy(face.vector.begin(), face.vector.end(), out.begin());
  std::copy(hand.vector.begin(), hand.vector.end(), out.begin() + kFaceDim);
  return out;
}

std::span<const float, kFaceDim> face_slice(std::span<const float, kFusedDim> fused) {
  return fused.first<kFaceDim>();
}

std::span<const float, kHandDim> hand_slice(std::span<const float, kFusedDim> fused) {
  return fused.last<kHandDim>();
}

}  // namespace signemo::features
