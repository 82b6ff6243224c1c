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

#include "signemo/annotation/service.hpp"

#include <chrono>
#include <ctime>
#include <random>

#include "signemo/corpus/manifest.hpp"
#include "signemo/util/io.hpp"
#include "signemo/util/random.hpp"
#include "signemo/util/strings.hpp"

namespace signemo::annotation {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string format_utc(std::chrono::system_clock::time_point tp) {
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(tp.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms % 1000));
  return out;
}

bool is_plain_relative(const std::string& path) {
  return !path.empty() && path.find("://") == std::string::npos && path.front() != '/';
}

}  // namespace

std::optional<Emotion> emotion_for_key(char key) {
  for (const auto& b : kKeymap) {
    if (b.key == key) return b.label;
  }
  return std::nullopt;
}

char key_for(Emotion e) {
  for (const auto& b : kKeymap) {
    if (b.label == e) return b.key;
  }
  throw ValidationError("no key for emotion");
}

ordered_json keymap_json() {
  ordered_json keys = ordered_json::array();
  for (const auto& b : kKeymap) {
    keys.push_back({{"key", std::string(1, b.key)}, {"label", std::string(to_string(b.label))}});
  }
  return {{"keys", std::move(keys)}};
}

std::string keymap_text() {
  std::vector<std::string> parts;
  for (const auto& b : kKeymap) parts.push_back(std::string(1, b.key) + "=" + std::string(to_string(b.label)));
  return util::join(parts, ", ");
}

ordered_json to_json(const AnnotationTask& task) {
  ordered_json j;
  j["clip_id"] = task.clip_id;
  j["subtitle_text"] = task.subtitle_text;
  j["context_before"] = task.context_before;
  j["context_after"] = task.context_after;
  j["video_url"] = task.video_url ? ordered_json(*task.video_url) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const AnnotationEvent& event) {
  ordered_json j;
  j["clip_id"] = event.clip_id;
  j["annotator_id"] = event.annotator_id;
  j["label"] = std::string(to_string(event.label));
  j["key_pressed"] = std::string(1, event.key_pressed);
  j["timestamp"] = event.timestamp;
  if (event.attempt) j["attempt"] = *event.attempt;
  return j;
}

std::string SystemClock::now() { return format_utc(std::chrono::system_clock::now()); }

std::string SteppingClock::now() {
  std::lock_guard lock(mu_);
  // 2026-01-01T00:00:00Z
  const auto base = std::chrono::system_clock::from_time_t(1767225600);
  return format_utc(base + std::chrono::seconds(ticks_++));
}

std::vector<AnnotationTask> build_tasks(const std::vector<corpus::ClipRecord>& records,
                                        std::size_t context_window,
                                        const std::string& media_prefix) {
  std::vector<const corpus::ClipRecord*> subtitled;
  for (const auto& r : records) {
    if (r.subtitle_text && !util::trim(*r.subtitle_text).empty()) subtitled.push_back(&r);
  }
  std::vector<AnnotationTask> tasks;
  tasks.reserve(subtitled.size());
  for (std::size_t i = 0; i < subtitled.size(); ++i) {
    const auto& r = *subtitled[i];
    AnnotationTask t;
    t.clip_id = r.clip_id;
    t.subtitle_text = *r.subtitle_text;
    for (std::size_t k = i >= context_window ? i - context_window : 0; k < i; ++k) {
      t.context_before.push_back(*subtitled[k]->subtitle_text);
    }
    for (std::size_t k = i + 1; k < subtitled.size() && k <= i + context_window; ++k) {
      t.context_after.push_back(*subtitled[k]->subtitle_text);
    }
    if (!media_prefix.empty() && is_plain_relative(r.video_path)) {
      t.video_url = media_prefix + r.video_path;
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

AnnotationService::AnnotationService(std::vector<corpus::ClipRecord> records,
                                     ServiceOptions options, std::shared_ptr<Clock> clock)
    : records_(std::move(records)),
      options_(std::move(options)),
      clock_(std::move(clock)),
      token_seed_(std::random_device{}() ^ (static_cast<std::uint64_t>(std::random_device{}()) << 32)) {
  tasks_ = build_tasks(records_, options_.context_window, options_.media_prefix);
  if (tasks_.empty()) throw ValidationError("annotation: no records with subtitle text");
  for (std::size_t i = 0; i < tasks_.size(); ++i) ordinal_[tasks_[i].clip_id] = i;
  if (options_.event_log.empty()) throw ValidationError("annotation: event log path is required");
  replay();
  log_.open(options_.event_log, std::ios::app | std::ios::binary);
  if (!log_) throw IoError("cannot open event log " + options_.event_log.string());
}

void AnnotationService::replay() {
  if (!fs::exists(options_.event_log)) return;
  std::string text = util::read_file(options_.event_log);
  // A torn final line (crash mid-write) is dropped and truncated away so the
  // next append starts on a clean line.
  const auto last_nl = text.rfind('\n');
  const std::size_t good = last_nl == std::string::npos ? 0 : last_nl + 1;
  if (good != text.size()) {
    text.resize(good);
    fs::resize_file(options_.event_log, good);
  }
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (util::trim(line).empty()) continue;
    try {
      apply(json::parse(line), true);
    } catch (const json::exception& e) {
      throw ParseError(options_.event_log.string(), line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(options_.event_log.string(), line_no, e.what());
    }
  }
}

void AnnotationService::apply(const json& j, bool from_log) {
  const std::string type = j.at("type").get<std::string>();
  const std::string annotator = j.at("annotator_id").get<std::string>();
  if (type == "session") {
    sessions_[annotator].token = j.at("token").get<std::string>();
  } else if (type == "served") {
    session_or_throw(annotator).served.insert(j.at("clip_id").get<std::string>());
  } else if (type == "label") {
    AnnotationEvent ev;
    ev.clip_id = j.at("clip_id").get<std::string>();
    ev.annotator_id = annotator;
    ev.label = parse_emotion(j.at("label").get<std::string>());
    ev.key_pressed = j.at("key_pressed").get<std::string>().at(0);
    ev.timestamp = j.at("timestamp").get<std::string>();
    if (j.contains("attempt")) ev.attempt = j["attempt"].get<std::uint64_t>();
    task_or_throw(ev.clip_id);
    auto& s = session_or_throw(annotator);
    if (s.labels.count(ev.clip_id)) audit_.emplace_back(annotator, ev.clip_id);
    if (ev.attempt) s.attempts.emplace(ev.clip_id, *ev.attempt);
    s.labels[ev.clip_id] = std::move(ev);
  } else {
    throw ValidationError("unknown event type '" + type + "'");
  }
  (void)from_log;
}

void AnnotationService::append(const ordered_json& j) {
  log_ << j.dump() << '\n';
  log_.flush();
  if (!log_) throw IoError("failed to write event log " + options_.event_log.string());
}

AnnotationService::Session& AnnotationService::session_or_throw(const std::string& id) {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("unknown_annotator", "unknown annotator '" + id + "'");
  return it->second;
}

const AnnotationService::Session& AnnotationService::session_or_throw(const std::string& id) const {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("unknown_annotator", "unknown annotator '" + id + "'");
  return it->second;
}

const AnnotationTask& AnnotationService::task_or_throw(const std::string& clip_id) const {
  const auto it = ordinal_.find(clip_id);
  if (it == ordinal_.end()) throw Error("unknown_clip", "no annotation task for clip '" + clip_id + "'");
  return tasks_[it->second];
}

std::string AnnotationService::open_session(const std::string& annotator_id) {
  if (util::trim(annotator_id).empty()) throw ValidationError("annotator_id must be non-empty");
  std::lock_guard lock(mu_);
  if (const auto it = sessions_.find(annotator_id); it != sessions_.end()) return it->second.token;
  if (!options_.annotators.empty() &&
      std::find(options_.annotators.begin(), options_.annotators.end(), annotator_id) ==
          options_.annotators.end()) {
    throw Error("unknown_annotator", "annotator '" + annotator_id + "' is not registered");
  }
  util::SplitMix64 rng(util::mix_seed(token_seed_ + token_counter_++, annotator_id));
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  ordered_json j{{"type", "session"}, {"annotator_id", annotator_id}, {"token", buf},
                 {"timestamp", clock_->now()}};
  append(j);
  sessions_[annotator_id].token = buf;
  return buf;
}

bool AnnotationService::check_token(const std::string& annotator_id, const std::string& token) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(annotator_id);
  return it != sessions_.end() && it->second.token == token;
}

std::vector<std::string> AnnotationService::annotators() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

NextTask AnnotationService::next_task(const std::string& annotator_id) {
  std::lock_guard lock(mu_);
  auto& s = session_or_throw(annotator_id);
  NextTask out;
  out.progress = {s.labels.size(), tasks_.size()};
  for (const auto& t : tasks_) {
    if (s.labels.count(t.clip_id)) continue;
    if (!s.served.count(t.clip_id)) {
      append({{"type", "served"}, {"annotator_id", annotator_id}, {"clip_id", t.clip_id},
              {"timestamp", clock_->now()}});
      s.served.insert(t.clip_id);
    }
    out.task = t;
    break;
  }
  return out;
}

AnnotationTask AnnotationService::task(const std::string& annotator_id, const std::string& clip_id) {
  std::lock_guard lock(mu_);
  auto& s = session_or_throw(annotator_id);
  const auto& t = task_or_throw(clip_id);
  if (s.labels.count(clip_id) && !options_.revisit) {
    throw Error("already_labeled", "clip '" + clip_id + "' is already labeled by '" + annotator_id +
                                       "' (revisit mode is off)");
  }
  if (!s.served.count(clip_id)) {
    append({{"type", "served"}, {"annotator_id", annotator_id}, {"clip_id", clip_id},
            {"timestamp", clock_->now()}});
    s.served.insert(clip_id);
  }
  return t;
}

SubmitResult AnnotationService::submit_label(AnnotationEvent event) {
  const auto label = emotion_for_key(event.key_pressed);
  if (!label) {
    throw Error("invalid_key", std::string("invalid key '") + event.key_pressed +
                                   "'; valid keys: " + keymap_text());
  }
  event.label = *label;
  std::lock_guard lock(mu_);
  auto& s = session_or_throw(event.annotator_id);
  task_or_throw(event.clip_id);
  if (!s.served.count(event.clip_id)) {
    throw Error("not_served", "clip '" + event.clip_id + "' was never served to '" +
                                  event.annotator_id + "'");
  }
  SubmitResult result;
  if (event.attempt && s.attempts.count({event.clip_id, *event.attempt})) {
    result.event = s.labels.at(event.clip_id);
    result.duplicate = true;
    return result;
  }
  event.timestamp = clock_->now();
  result.replaced = s.labels.count(event.clip_id) > 0;
  ordered_json j{{"type", "label"}};
  const auto event_json = to_json(event);
  for (const auto& [k, v] : event_json.items()) j[k] = v;
  if (result.replaced) j["replaces_previous"] = true;
  append(j);
  if (result.replaced) audit_.emplace_back(event.annotator_id, event.clip_id);
  if (event.attempt) s.attempts.emplace(event.clip_id, *event.attempt);
  s.labels[event.clip_id] = event;
  result.event = std::move(event);
  return result;
}

Progress AnnotationService::progress(const std::string& annotator_id) const {
  std::lock_guard lock(mu_);
  return {session_or_throw(annotator_id).labels.size(), tasks_.size()};
}

std::optional<Emotion> AnnotationService::label_of(const std::string& annotator_id,
                                                   const std::string& clip_id) const {
  std::lock_guard lock(mu_);
  const auto& s = session_or_throw(annotator_id);
  const auto it = s.labels.find(clip_id);
  if (it == s.labels.end()) return std::nullopt;
  return it->second.label;
}

std::vector<std::pair<std::string, std::string>> AnnotationService::audit() const {
  std::lock_guard lock(mu_);
  return audit_;
}

ExportResult AnnotationService::export_annotations(const std::vector<std::string>& annotator_ids,
                                                   bool partial) const {
  std::lock_guard lock(mu_);
  if (annotator_ids.empty()) throw ValidationError("export: no annotators given");
  std::vector<std::string> incomplete;
  for (const auto& id : annotator_ids) {
    const auto& s = session_or_throw(id);
    const std::size_t remaining = tasks_.size() - s.labels.size();
    if (remaining > 0) {
      incomplete.push_back("'" + id + "' has " + std::to_string(remaining) + " remaining task" +
                           (remaining == 1 ? "" : "s"));
    }
  }
  if (!incomplete.empty() && !partial) {
    throw Error("incomplete", "annotation incomplete: " + util::join(incomplete, ", ") +
                                  " (use partial export to proceed)");
  }

  std::map<std::string, const corpus::ClipRecord*> by_id;
  for (const auto& r : records_) by_id[r.clip_id] = &r;

  ExportResult out;
  out.annotators = annotator_ids;
  std::vector<corpus::ClipRecord> merged;
  for (const auto& t : tasks_) {
    corpus::ClipRecord m = *by_id.at(t.clip_id);
    bool any = false;
    for (const auto& id : annotator_ids) {
      const auto& s = sessions_.at(id);
      const auto it = s.labels.find(t.clip_id);
      if (it == s.labels.end()) continue;
      corpus::ClipLabel label{it->second.label, corpus::LabelProvenance::annotator(id)};
      corpus::ClipRecord layer = *by_id.at(t.clip_id);
      layer.set_label(label);
      out.layers[id].push_back(std::move(layer));
      m.set_label(label);
      any = true;
    }
    if (any) merged.push_back(std::move(m));
  }
  for (const auto& id : annotator_ids) out.layers[id];
  if (annotator_ids.size() == 2) {
    out.consensus = evaluation::consensus_subset(merged, annotator_ids[0], annotator_ids[1]);
  }
  return out;
}

ordered_json to_json(const ExportResult& result) {
  ordered_json j;
  j["annotators"] = result.annotators;
  ordered_json layers = ordered_json::object();
  for (const auto& id : result.annotators) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : result.layers.at(id)) arr.push_back(corpus::to_json(r));
    layers[id] = std::move(arr);
  }
  j["layers"] = std::move(layers);
  if (result.consensus) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : result.consensus->records) arr.push_back(corpus::to_json(r));
    j["consensus"] = std::move(arr);
    j["agreement"] = evaluation::to_json(*result.consensus, result.annotators[0], result.annotators[1]);
  } else {
    j["consensus"] = nullptr;
    j["agreement"] = nullptr;
  }
  return j;
}

}  // namespace signemo::annotation
