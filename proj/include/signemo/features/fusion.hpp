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

#include "signemo/features/types.hpp"

namespace signemo::features {

/// Maps each valid hand into a hand-centred frame: wrist at the origin, the
/// wrist -> middle-finger MCP bone along +y, and that bone of unit length.
///
/// The result is invariant to image-plane translation, rotation and uniform
/// positive scaling of a hand. A hand whose reference bone has (near) zero
/// length, or that contains non-finite coordinates, is emitted as zeros and
/// flagged invalid. Throws if an invalid input hand has non-zero points.
CanonicalHandFeature canonicalize_hands(const HandKeypoints& raw);

/// Concatenates face [0, 512) and hand [512, 596).
FusedFrame fuse(const FaceEmbedding& face, const CanonicalHandFeature& hand);

/// Inverse of fuse(): the two slices of a fused vector.
std::span<const float, kFaceDim> face_slice(std::span<const float, kFusedDim> fused);
std::span<const float, kHandDim> hand_slice(std::span<const float, kFusedDim> fused);

}  // namespace signemo::features
