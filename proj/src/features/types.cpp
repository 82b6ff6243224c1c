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

#include "signemo/features/types.hpp"

#include "signemo/error.hpp"

namespace signemo::features {

void FrameFeatureSequence::push_back(const FusedFrame& frame, bool face_valid, bool hand_valid) {
  data_.insert(data_.end(), frame.begin(), frame.end());
  face_valid_.push_back(face_valid ? 1 : 0);
  hand_valid_.push_back(hand_valid ? 1 : 0);
}

FrameFeatureSequence FrameFeatureSequence::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw ValidationError("frame slice out of range");
  FrameFeatureSequence out(fps_);
  out.data_.assign(data_.begin() + static_cast<std::ptrdiff_t>(begin * kFusedDim),
                   data_.begin() + static_cast<std::ptrdiff_t>(end * kFusedDim));
  out.face_valid_.assign(face_valid_.begin() + static_cast<std::ptrdiff_t>(begin),
                         face_valid_.begin() + static_cast<std::ptrdiff_t>(end));
  out.hand_valid_.assign(hand_valid_.begin() + static_cast<std::ptrdiff_t>(begin),
                         hand_valid_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

}  // namespace signemo::features
