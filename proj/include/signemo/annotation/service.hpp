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
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/corpus/types.hpp"
#include "signemo/emotion.hpp"
#include "signemo/error.hpp"
#include "signemo/evaluation/agreement.hpp"

namespace signemo::annotation {

struct KeyBinding {
  char key;
  Emotion label;
};

/// The fixed single-key table, sorted by key.
inline constexpr std::array<KeyBinding, kNumEmotions> kKeymap = {{
    {'a', Emotion::kAnger},
    {'d', Emotion::kDisgust},
    {'f', Emotion::kFear},
    {'j', Emotion::kJoy},
    {'n', Emotion::kNeutral},
    {'s', Emotion::kSadness},
    {'u', Emotion::kSurprise},
}};

std::optional<Emotion> emotion_for_key(char key);
char key_for(Emotion e);
nlohmann::ordered_json keymap_json();
/// "a=anger, d=disgust, ..." for error messages.
std::string keymap_text();

struct AnnotationTask {
  std::string clip_id;
  std::string subtitle_text;
  std::vector<std::string> context_before;
  std::vector<std::string> context_after;
  std::optional<std::string> video_url;
  bool operator==(const AnnotationTask&) const = default;
};

struct AnnotationEvent {
  std::string clip_id;
  std::string annotator_id;
  Emotion label = Emotion::kNeutral;
  char key_pressed = 'n';
  std::string timestamp;
  /// Client-side attempt counter. A repeated (annotator, clip, attempt) is
  /// acknowledged without writing a second event.
  std::optional<std::uint64_t> attempt;
  bool operator==(const AnnotationEvent&) const = default;
};

nlohmann::ordered_json to_json(const AnnotationTask& task);
nlohmann::ordered_json to_json(const AnnotationEvent& event);

class Clock {
 public:
  virtual ~Clock() = default;
  /// ISO-8601 UTC timestamp.
  virtual std::string now() = 0;
};

class SystemClock final : public Clock {
 public:
  std::string now() override;
};

/// Returns "2026-01-01T00:00:00.000Z" plus one second per call.
class SteppingClock final : public Clock {
 public:
  std::string now() override;

 private:
  std::mutex mu_;
  std::uint64_t ticks_ = 0;
};

/// Tasks for every record with a non-empty subtitle, in manifest order.
/// Context comes from the neighbouring subtitled records.
std::vector<AnnotationTask> build_tasks(const std::vector<corpus::ClipRecord>& records,
                                        std::size_t context_window = 2,
                                        const std::string& media_prefix = "");

struct ServiceOptions {
  std::filesystem::path event_log;
  std::size_t context_window = 2;
  /// When non-empty, tasks whose video path is a plain relative file get
  /// video_url = media_prefix + video_path.
  std::string media_prefix;
  /// Allows fetching tasks the annotator already labeled.
  bool revisit = false;
  /// Annotators allowed to open a session. Empty means anyone.
  std::vector<std::string> annotators;
};

struct Progress {
  std::size_t done = 0;
  std::size_t total = 0;
};

struct NextTask {
  std::optional<AnnotationTask> task;  // nullopt means done
  Progress progress;
};

struct SubmitResult {
  AnnotationEvent event;
  bool replaced = false;
  bool duplicate = false;
};

struct ExportResult {
  std::vector<std::string> annotators;
  /// One layer per annotator, manifest order, only labeled clips.
  std::map<std::string, std::vector<corpus::ClipRecord>> layers;
  /// Set when exactly two annotators are exported.
  std::optional<evaluation::ConsensusResult> consensus;
};

nlohmann::ordered_json to_json(const ExportResult& result);

/// Annotation backend over an append-only JSONL event log. Opening an
/// existing log replays it. All methods are thread-safe; writes are
/// serialized and flushed before returning.
class AnnotationService {
 public:
  AnnotationService(std::vector<corpus::ClipRecord> records, ServiceOptions options,
                    std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

  const std::vector<AnnotationTask>& tasks() const { return tasks_; }
  const ServiceOptions& options() const { return options_; }

  /// Opens (or reopens) a session and returns its token.
  std::string open_session(const std::string& annotator_id);
  bool check_token(const std::string& annotator_id, const std::string& token) const;
  std::vector<std::string> annotators() const;

  NextTask next_task(const std::string& annotator_id);
  /// Revisit mode only: serves a specific task.
  AnnotationTask task(const std::string& annotator_id, const std::string& clip_id);

  /// `event.label` is derived from the key; `event.timestamp` is set by the
  /// service clock.
  SubmitResult submit_label(AnnotationEvent event);

  Progress progress(const std::string& annotator_id) const;
  std::optional<Emotion> label_of(const std::string& annotator_id,
                                  const std::string& clip_id) const;
  /// Audit entries for replaced labels: (annotator, clip) in log order.
  std::vector<std::pair<std::string, std::string>> audit() const;

  ExportResult export_annotations(const std::vector<std::string>& annotator_ids,
                                  bool partial = false) const;

 private:
  struct Session {
    std::string token;
    std::set<std::string> served;
    std::map<std::string, AnnotationEvent> labels;
    std::set<std::pair<std::string, std::uint64_t>> attempts;
  };

  void replay();
  void apply(const nlohmann::json& j, bool from_log);
  void append(const nlohmann::ordered_json& j);
  Session& session_or_throw(const std::string& annotator_id);
  const Session& session_or_throw(const std::string& annotator_id) const;
  const AnnotationTask& task_or_throw(const std::string& clip_id) const;

  std::vector<corpus::ClipRecord> records_;
  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> ordinal_;
  ServiceOptions options_;
  std::shared_ptr<Clock> clock_;

  mutable std::mutex mu_;
  std::map<std::string, Session> sessions_;
  std::vector<std::pair<std::string, std::string>> audit_;
  std::ofstream log_;
  std::uint64_t token_counter_ = 0;
  std::uint64_t token_seed_;
};

}  // namespace signemo::annotation
