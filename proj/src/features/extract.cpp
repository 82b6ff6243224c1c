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

#include "signemo/features/extract.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <thread>

#include "signemo/error.hpp"
#include "signemo/features/feature_file.hpp"
#include "signemo/features/fusion.hpp"
#include "signemo/util/random.hpp"
#include "signemo/util/strings.hpp"

namespace signemo::features {
namespace {

constexpr std::string_view kSyntheticScheme = "synthetic://";
constexpr double kTwoPi = 6.283185307179586;

double mean_intensity(const Frame& f) {
  if (f.rgb.empty()) return 0.0;
  double s = 0.0;
  for (auto v : f.rgb) s += v;
  return s / static_cast<double>(f.rgb.size());
}

struct SyntheticSpec {
  std::string name;
  std::optional<Emotion> emotion;
  std::optional<std::size_t> frames;
  std::uint64_t seed = 0;
  double dropout = 0.0;
  double signal = 1.0;
};

SyntheticSpec parse_synthetic(const std::string& path) {
  if (path.rfind(kSyntheticScheme, 0) != 0) {
    throw ValidationError("not a synthetic video path: " + path);
  }
  SyntheticSpec spec;
  const std::string rest = path.substr(kSyntheticScheme.size());
  const auto q = rest.find('?');
  spec.name = rest.substr(0, q);
  spec.seed = util::fnv1a64(spec.name);
  if (q == std::string::npos) return spec;
  for (const auto& kv : util::split(rest.substr(q + 1), '&')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "emotion") {
        spec.emotion = parse_emotion(value);
      } else if (key == "frames") {
        spec.frames = std::stoul(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "dropout") {
        spec.dropout = std::stod(value);
      } else if (key == "signal") {
        spec.signal = std::stod(value);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("bad synthetic video parameter '" + kv + "' in " + path);
    }
  }
  return spec;
}

// Canonical right-hand template: wrist at origin, middle MCP at (0, 1).
std::array<Point2, kKeypointsPerHand> hand_template(double curl) {
  std::array<Point2, kKeypointsPerHand> t{};
  const std::array<Point2, 5> bases = {Point2{-0.45, 0.3}, Point2{-0.35, 0.95}, Point2{0.0, 1.0},
                                       Point2{0.3, 0.95}, Point2{0.55, 0.85}};
  const std::array<double, 5> headings = {-0.9, -0.12, 0.0, 0.1, 0.25};
  const std::array<double, 5> lengths = {0.3, 0.33, 0.36, 0.33, 0.27};
  for (std::size_t f = 0; f < 5; ++f) {
    Point2 p = bases[f];
    double heading = headings[f];
    t[1 + 4 * f] = p;
    for (std::size_t j = 1; j < 4; ++j) {
      heading += curl * (f == 0 ? 0.5 : 1.0);
      p.x += lengths[f] * std::sin(heading);
      p.y += lengths[f] * std::cos(heading);
      t[1 + 4 * f + j] = p;
    }
  }
  t[kWrist] = {0.0, 0.0};
  return t;
}

}  // namespace

std::vector<FaceEmbedding> extract_face(const std::vector<Frame>& frames,
                                        const FaceEmbedder& embedder) {
  if (frames.empty()) throw ValidationError("extract_face: no frames");
  std::vector<FaceEmbedding> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (auto v = embedder.embed(frames[i])) {
      out[i].vector = *v;
      out[i].valid = true;
    }
  }
  return out;
}

std::vector<CanonicalHandFeature> extract_hands(const std::vector<Frame>& frames,
                                                const HandDetector& detector) {
  std::vector<CanonicalHandFeature> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(canonicalize_hands(detector.detect(f)));
  return out;
}

FrameFeatureSequence fuse_sequence(const std::vector<FaceEmbedding>& faces,
                                   const std::vector<CanonicalHandFeature>& hands, double fps) {
  if (faces.size() != hands.size()) {
    throw ValidationError("fuse_sequence: " + std::to_string(faces.size()) + " face frames vs " +
                          std::to_string(hands.size()) + " hand frames");
  }
  FrameFeatureSequence seq(fps);
  for (std::size_t t = 0; t < faces.size(); ++t) {
    seq.push_back(fuse(faces[t], hands[t]), faces[t].valid, hands[t].any_valid());
  }
  return seq;
}

SegmentStrategy clip_strategy(SegmentKind kind, std::uint64_t run_seed,
                              const std::string& clip_id, double window_s) {
  SegmentStrategy s;
  s.kind = kind;
  s.window_s = window_s;
  s.seed = util::mix_seed(run_seed, clip_id);
  return s;
}

ClipFeatures extract_clip(const corpus::ClipRecord& record, const FrameSource& source,
                          const FaceEmbedder& embedder, const HandDetector& detector,
                          const SegmentStrategy& strategy) {
  ClipFeatures out;
  out.source_frames = source.frame_count(record);
  out.segment = select_segment(out.source_frames, record.fps, strategy);
  std::vector<Frame> frames;
  frames.reserve(out.segment.size());
  for (std::size_t t = out.segment.begin; t < out.segment.end; ++t) {
    frames.push_back(source.frame(record, t));
  }
  out.sequence = fuse_sequence(extract_face(frames, embedder), extract_hands(frames, detector),
                               record.fps);
  return out;
}

nlohmann::ordered_json to_json(const ExtractRun& run) {
  nlohmann::ordered_json j;
  j["input_records"] = run.input_records;
  j["written"] = run.written;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& f : run.failures) failures.push_back({{"clip_id", f.clip_id}, {"error", f.error}});
  j["failures"] = std::move(failures);
  return j;
}

ExtractRun extract_manifest(const std::vector<corpus::ClipRecord>& records,
                            const FrameSource& source, const FaceEmbedder& embedder,
                            const HandDetector& detector, const std::filesystem::path& out_dir,
                            const ExtractOptions& options) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::optional<std::string>> errors(records.size());
  auto work = [&](std::size_t i) {
    const auto& r = records[i];
    try {
      if (!source.accepts(r)) {
        throw Error("no_decoder", "no frame source can decode '" + r.video_path + "'");
      }
      const auto strategy = clip_strategy(options.kind, options.seed, r.clip_id, options.window_s);
      auto clip = extract_clip(r, source, embedder, detector, strategy);
      FeatureFile file{r.clip_id, std::move(clip.sequence), options.kind, clip.segment,
                       clip.source_frames};
      write_feature_file(feature_path(out_dir, r.clip_id), file);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, records.size()));
  if (!embedder.concurrent_safe() || !detector.concurrent_safe()) jobs = 1;
  if (jobs == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < records.size(); i += jobs) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  ExtractRun run;
  run.input_records = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (errors[i]) {
      run.failures.push_back({records[i].clip_id, *errors[i]});
    } else {
      ++run.written;
    }
  }
  if (!records.empty() && run.written == 0) {
    throw Error("extract_failed", "feature extraction failed for all " +
                                      std::to_string(records.size()) + " clips; first error: " +
                                      run.failures.front().error);
  }
  return run;
}

ConstantFaceEmbedder::ConstantFaceEmbedder(std::array<float, kFaceDim> value) : value_(value) {}

ConstantFaceEmbedder::ConstantFaceEmbedder() : value_{} { value_[0] = 1.0f; }

std::optional<std::array<float, kFaceDim>> ConstantFaceEmbedder::embed(const Frame& frame) const {
  if (mean_intensity(frame) <= 0.0) return std::nullopt;
  return value_;
}

ProjectionFaceEmbedder::ProjectionFaceEmbedder(std::uint64_t seed) {
  constexpr std::size_t in_dim = kGrid * kGrid * 3;
  projection_.resize(kFaceDim * in_dim);
  util::SplitMix64 rng(seed);
  const double scale = 3.0 / std::sqrt(static_cast<double>(in_dim));
  for (auto& w : projection_) w = static_cast<float>(rng.normal() * scale);
}

std::optional<std::array<float, kFaceDim>> ProjectionFaceEmbedder::embed(const Frame& f) const {
  if (f.width <= 0 || f.height <= 0 || mean_intensity(f) < 2.0) return std::nullopt;
  constexpr std::size_t in_dim = kGrid * kGrid * 3;
  std::array<double, in_dim> pooled{};
  std::array<int, kGrid * kGrid> hits{};
  for (int y = 0; y < f.height; ++y) {
    const int gy = y * kGrid / f.height;
    for (int x = 0; x < f.width; ++x) {
      const int gx = x * kGrid / f.width;
      const std::size_t cell = static_cast<std::size_t>(gy * kGrid + gx);
      ++hits[cell];
      for (int c = 0; c < 3; ++c) {
        pooled[cell * 3 + c] += f.rgb[static_cast<std::size_t>((y * f.width + x) * 3 + c)];
      }
    }
  }
  for (std::size_t i = 0; i < in_dim; ++i) {
    pooled[i] = (pooled[i] / std::max(hits[i / 3], 1) / 255.0 - 0.5) * 2.0;
  }
  std::array<float, kFaceDim> out{};
  for (std::size_t r = 0; r < kFaceDim; ++r) {
    double s = 0.0;
    const float* row = projection_.data() + r * in_dim;
    for (std::size_t i = 0; i < in_dim; ++i) s += row[i] * pooled[i];
    out[r] = static_cast<float>(std::tanh(s));
  }
  return out;
}

HandKeypoints SyntheticHandDetector::detect(const Frame& f) const {
  HandKeypoints out;
  if (f.width <= 0 || f.height <= 0 || mean_intensity(f) < 2.0) return out;
  std::array<double, 3> channel_mean{};
  double cx = 0.0, cy = 0.0, mass = 0.0;
  double quadrant = 0.0;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const std::size_t i = static_cast<std::size_t>((y * f.width + x) * 3);
      double lum = 0.0;
      for (int c = 0; c < 3; ++c) {
        channel_mean[c] += f.rgb[i + c];
        lum += f.rgb[i + c];
      }
      cx += x * lum;
      cy += y * lum;
      mass += lum;
      if (x < f.width / 2 && y < f.height / 2) quadrant += lum;
    }
  }
  const double pixels = static_cast<double>(f.width) * f.height;
  for (auto& m : channel_mean) m /= pixels;
  cx /= mass;
  cy /= mass;
  // Map the frame statistics onto a 640x480 image plane.
  const double px = 640.0 * cx / f.width;
  const double py = 480.0 * cy / f.height;
  const double curl = 0.6 * (4.0 * quadrant / mass - 1.0) + 0.2;
  const double angle = kTwoPi * channel_mean[0] / 255.0;
  const double scale = 40.0 + channel_mean[1] / 4.0;

  auto place = [&](std::size_t hand, double mirror, double dx) {
    const auto tmpl = hand_template(curl * (hand == 0 ? 1.0 : 0.7));
    const double ca = std::cos(angle * mirror), sa = std::sin(angle * mirror);
    for (std::size_t i = 0; i < kKeypointsPerHand; ++i) {
      const double x = mirror * tmpl[i].x * scale;
      const double y = -tmpl[i].y * scale;
      out.points[hand * kKeypointsPerHand + i] = {px + dx + ca * x - sa * y,
                                                  py + sa * x + ca * y};
    }
  };
  place(0, -1.0, -120.0);
  out.valid_left = true;
  if (channel_mean[2] > 110.0) {
    place(1, 1.0, 120.0);
    out.valid_right = true;
  }
  return out;
}

bool SyntheticFrameSource::accepts(const corpus::ClipRecord& record) const {
  return record.video_path.rfind(kSyntheticScheme, 0) == 0;
}

std::size_t SyntheticFrameSource::frame_count(const corpus::ClipRecord& record) const {
  const auto spec = parse_synthetic(record.video_path);
  if (spec.frames) return *spec.frames;
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(record.duration() * record.fps)));
}

Frame SyntheticFrameSource::frame(const corpus::ClipRecord& record, std::size_t index) const {
  const auto spec = parse_synthetic(record.video_path);
  const std::size_t n = spec.frames.value_or(frame_count(record));
  Frame f;
  f.width = kSize;
  f.height = kSize;
  f.rgb.assign(static_cast<std::size_t>(kSize * kSize * 3), 0);
  util::SplitMix64 rng(util::mix_seed(spec.seed, "frame" + std::to_string(index)));
  if (spec.dropout > 0.0 && rng.uniform01() < spec.dropout) return f;

  const double progress = n > 1 ? static_cast<double>(index) / static_cast<double>(n - 1) : 1.0;
  const double strength = 0.25 + 0.75 * progress * progress;
  double fx = 0.0, fy = 0.0, phase = 0.0, amp = 0.0;
  if (spec.emotion) {
    const double e = static_cast<double>(index_of(*spec.emotion));
    fx = 1.0 + std::fmod(e * 1.7, 3.0);
    fy = 0.5 + std::fmod(e * 2.3, 2.5);
    phase = e * 0.9;
    amp = 55.0 * strength * spec.signal;
  }
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double pattern =
            std::cos(kTwoPi * (fx * x + fy * y) / kSize + phase + 1.3 * c);
        const double v = 128.0 + amp * pattern + 22.0 * rng.normal();
        f.rgb[static_cast<std::size_t>((y * kSize + x) * 3 + c)] =
            static_cast<std::uint8_t>(std::clamp(std::lround(v), 1L, 255L));
      }
    }
  }
  return f;
}

std::string synthetic_video_path(const std::string& name, std::optional<Emotion> emotion,
                                 std::size_t frames, std::uint64_t seed, double dropout,
                                 double signal) {
  std::string out = std::string(kSyntheticScheme) + name + "?";
  if (emotion) out += "emotion=" + std::string(to_string(*emotion)) + "&";
  out += "frames=" + std::to_string(frames) + "&seed=" + std::to_string(seed);
  if (dropout > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "&dropout=%.3g", dropout);
    out += buf;
  }
  if (signal != 1.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "&signal=%.3g", signal);
    out += buf;
  }
  return out;
}

std::unique_ptr<FaceEmbedder> make_face_embedder(const std::string& name) {
  if (name == "stub" || name == "stub-projection") return std::make_unique<ProjectionFaceEmbedder>();
  if (name == "constant") return std::make_unique<ConstantFaceEmbedder>();
  throw Error("backbone_init", "face backbone '" + name +
                                   "' is not available (built-in: stub-projection, constant)");
}

std::unique_ptr<HandDetector> make_hand_detector(const std::string& name) {
  if (name == "stub" || name == "stub-synthetic") return std::make_unique<SyntheticHandDetector>();
  throw Error("backbone_init",
              "hand detector '" + name + "' is not available (built-in: stub-synthetic)");
}

}  // namespace signemo::features
