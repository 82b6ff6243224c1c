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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/corpus/types.hpp"
#include "signemo/features/segment.hpp"
#include "signemo/features/types.hpp"

namespace signemo::features {

/// Face detection + embedding. Returns nullopt when no face is found.
class FaceEmbedder {
 public:
  virtual ~FaceEmbedder() = default;
  virtual std::optional<std::array<float, kFaceDim>> embed(const Frame& frame) const = 0;
  virtual std::string id() const = 0;
  virtual bool concurrent_safe() const { return true; }
};

/// Raw 2D hand keypoints for a frame.
class HandDetector {
 public:
  virtual ~HandDetector() = default;
  virtual HandKeypoints detect(const Frame& frame) const = 0;
  virtual std::string id() const = 0;
  virtual bool concurrent_safe() const { return true; }
};

/// Produces decoded frames for a clip.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// True if this source can decode the record's video_path.
  virtual bool accepts(const corpus::ClipRecord& record) const = 0;
  virtual std::size_t frame_count(const corpus::ClipRecord& record) const = 0;
  virtual Frame frame(const corpus::ClipRecord& record, std::size_t index) const = 0;
};

std::vector<FaceEmbedding> extract_face(const std::vector<Frame>& frames,
                                        const FaceEmbedder& embedder);

std::vector<CanonicalHandFeature> extract_hands(const std::vector<Frame>& frames,
                                                const HandDetector& detector);

/// Fuses per-frame face and hand features. Lengths must match.
FrameFeatureSequence fuse_sequence(const std::vector<FaceEmbedding>& faces,
                                   const std::vector<CanonicalHandFeature>& hands, double fps);

struct ClipFeatures {
  FrameFeatureSequence sequence;
  FrameRange segment;
  std::size_t source_frames = 0;
};

/// Per-clip segment strategy: random segments get a seed derived from the
/// run seed and clip id, so every clip is drawn once per run.
SegmentStrategy clip_strategy(SegmentKind kind, std::uint64_t run_seed,
                              const std::string& clip_id, double window_s = 2.0);

/// Selects the segment, decodes only those frames, and extracts features.
ClipFeatures extract_clip(const corpus::ClipRecord& record, const FrameSource& source,
                          const FaceEmbedder& embedder, const HandDetector& detector,
                          const SegmentStrategy& strategy);

struct ExtractOptions {
  SegmentKind kind = SegmentKind::kFull;
  std::uint64_t seed = 0;
  double window_s = 2.0;
  std::size_t jobs = 1;
};

struct ExtractFailure {
  std::string clip_id;
  std::string error;
};

struct ExtractRun {
  std::size_t input_records = 0;
  std::size_t written = 0;
  std::vector<ExtractFailure> failures;  // manifest order
};

nlohmann::ordered_json to_json(const ExtractRun& run);

/// Extracts every record into `out_dir` (one feature file per clip). A clip
/// that cannot be decoded is reported and skipped. Throws if none succeed.
ExtractRun extract_manifest(const std::vector<corpus::ClipRecord>& records,
                            const FrameSource& source, const FaceEmbedder& embedder,
                            const HandDetector& detector, const std::filesystem::path& out_dir,
                            const ExtractOptions& options);

// Deterministic stand-ins used by tests, fixtures and the CLI.

/// Returns the same vector for every frame that is not entirely black.
class ConstantFaceEmbedder final : public FaceEmbedder {
 public:
  explicit ConstantFaceEmbedder(std::array<float, kFaceDim> value);
  /// e_0 unit vector.
  ConstantFaceEmbedder();
  std::optional<std::array<float, kFaceDim>> embed(const Frame& frame) const override;
  std::string id() const override { return "constant"; }

 private:
  std::array<float, kFaceDim> value_;
};

/// Fixed random projection of the downsampled frame through tanh. Frames
/// whose mean intensity is below a small threshold count as "no face".
class ProjectionFaceEmbedder final : public FaceEmbedder {
 public:
  explicit ProjectionFaceEmbedder(std::uint64_t seed = 7);
  std::optional<std::array<float, kFaceDim>> embed(const Frame& frame) const override;
  std::string id() const override { return "stub-projection"; }

  static constexpr int kGrid = 8;

 private:
  std::vector<float> projection_;  // kFaceDim x (kGrid * kGrid * 3)
};

/// Derives a plausible pair of hands from coarse image statistics. Frames
/// that are entirely black have no hands.
class SyntheticHandDetector final : public HandDetector {
 public:
  HandKeypoints detect(const Frame& frame) const override;
  std::string id() const override { return "stub-synthetic"; }
};

/// Renders frames for
/// "synthetic://<name>?emotion=<label>&frames=<n>&seed=<s>&dropout=<p>&signal=<a>"
/// video paths. The emotion controls a spatial pattern whose strength ramps
/// up towards the end of the clip and is scaled by `signal` (default 1);
/// `dropout` blanks a fraction of frames.
class SyntheticFrameSource final : public FrameSource {
 public:
  static constexpr int kSize = 16;

  bool accepts(const corpus::ClipRecord& record) const override;
  std::size_t frame_count(const corpus::ClipRecord& record) const override;
  Frame frame(const corpus::ClipRecord& record, std::size_t index) const override;
};

std::string synthetic_video_path(const std::string& name, std::optional<Emotion> emotion,
                                 std::size_t frames, std::uint64_t seed, double dropout = 0.0,
                                 double signal = 1.0);

std::unique_ptr<FaceEmbedder> make_face_embedder(const std::string& name);
std::unique_ptr<HandDetector> make_hand_detector(const std::string& name);

}  // namespace signemo::features
