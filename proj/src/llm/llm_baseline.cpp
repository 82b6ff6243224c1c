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

#include "signemo/llm/llm_baseline.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "signemo/util/image.hpp"
#include "signemo/util/io.hpp"
#include "signemo/util/strings.hpp"

namespace signemo::llm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kRetryMarker = "---retry---";

// Keep in sync with assets/llm_prompt.txt (a test checks this).
constexpr std::string_view kDefaultInstruction =
    "The images are frames sampled in order from one video clip of a person communicating in a "
    "sign language. Judge the emotion the signer expresses, using their face, head, body and "
    "hands. Choose exactly one label from: {labels}. Use neutral when no clear emotion is shown. "
    "Reply with the label only, as a single lowercase word.";
constexpr std::string_view kDefaultRetry =
    "Your previous reply could not be read. Reply with exactly one word from this list and "
    "nothing else: {labels}.";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string default_base_url(const std::string& provider) {
  if (provider == "openai") return "https://api.openai.com/v1";
  return "http://localhost:8000/v1";
}

}  // namespace

void validate(const LlmEndpointConfig& cfg) {
  if (cfg.model_name.empty()) throw ValidationError("llm config: model name is required");
  if (cfg.max_frames < 1) throw ValidationError("llm config: max_frames must be >= 1");
  if (cfg.max_concurrent < 1) throw ValidationError("llm config: max_concurrent must be >= 1");
  if (cfg.temperature < 0.0) throw ValidationError("llm config: temperature must be >= 0");
}

nlohmann::ordered_json to_json(const LlmEndpointConfig& cfg) {
  nlohmann::ordered_json j;
  j["provider_id"] = cfg.provider_id;
  j["model_name"] = cfg.model_name;
  j["base_url"] = cfg.base_url.empty() ? default_base_url(cfg.provider_id) : cfg.base_url;
  j["api_key_env_var"] = cfg.api_key_env_var;
  j["temperature"] = cfg.temperature;
  j["max_frames"] = cfg.max_frames;
  j["timeout_s"] = cfg.timeout_s;
  j["retries"] = cfg.retries;
  j["max_concurrent"] = cfg.max_concurrent;
  j["requests_per_minute"] = cfg.requests_per_minute;
  return j;
}

MockTransport::MockTransport(json fixtures) : fixtures_(std::move(fixtures)) {
  if (!fixtures_.is_object()) throw ValidationError("mock fixtures must be a JSON object");
}

std::unique_ptr<MockTransport> MockTransport::from_file(const fs::path& path) {
  try {
    return std::make_unique<MockTransport>(json::parse(util::read_file(path)));
  } catch (const json::exception& e) {
    throw ValidationError("mock fixtures " + path.string() + ": " + e.what());
  }
}

std::string MockTransport::complete(const ChatRequest& request) {
  std::size_t n;
  {
    std::lock_guard lock(mu_);
    n = calls_[request.clip_id]++;
  }
  const json* list = nullptr;
  if (fixtures_.contains("clips") && fixtures_["clips"].contains(request.clip_id)) {
    list = &fixtures_["clips"][request.clip_id];
  } else if (fixtures_.contains("default")) {
    list = &fixtures_["default"];
  }
  if (!list || !list->is_array() || list->empty()) {
    throw TransportError("no recorded response for clip '" + request.clip_id + "'");
  }
  const json& entry = (*list)[std::min(n, list->size() - 1)];
  if (entry.is_object() && entry.contains("error")) {
    throw TransportError(entry["error"].get<std::string>());
  }
  return entry.get<std::string>();
}

std::size_t MockTransport::calls(const std::string& clip_id) const {
  std::lock_guard lock(mu_);
  const auto it = calls_.find(clip_id);
  return it == calls_.end() ? 0 : it->second;
}

HttpChatTransport::HttpChatTransport(const LlmEndpointConfig& cfg) : cfg_(cfg) {
  if (cfg_.base_url.empty()) cfg_.base_url = default_base_url(cfg_.provider_id);
  if (!cfg_.api_key_env_var.empty()) {
    const char* key = std::getenv(cfg_.api_key_env_var.c_str());
    if (!key || !*key) {
      throw Error("credentials", "environment variable " + cfg_.api_key_env_var +
                                     " is not set (needed for provider " + cfg_.provider_id + ")");
    }
    api_key_ = key;
  }
}

json HttpChatTransport::build_body(const ChatRequest& request) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", request.prompt}});
  for (const auto& img : request.images) {
    content.push_back({{"type", "image_url"},
                       {"image_url", {{"url", "data:" + img.mime_type + ";base64," + img.base64}}}});
  }
  return {{"model", request.model},
          {"temperature", request.temperature},
          {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
}

std::string HttpChatTransport::extract_text(std::string_view body) {
  try {
    const auto j = json::parse(body);
    const auto& msg = j.at("choices").at(0).at("message").at("content");
    if (msg.is_string()) return msg.get<std::string>();
    std::string text;
    for (const auto& part : msg) {
      if (part.value("type", "") == "text") text += part.value("text", "");
    }
    return text;
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat completion response: ") + e.what());
  }
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  const std::string& url = cfg_.base_url;
  const auto scheme_end = url.find("://");
  const auto path_begin = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string host = url.substr(0, path_begin);
  std::string prefix = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(host);
  const auto secs = static_cast<time_t>(cfg_.timeout_s);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(prefix + "/chat/completions", headers, build_body(request).dump(),
                         "application/json");
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  return extract_text(res->body);
}

std::string RecordingTransport::complete(const ChatRequest& request) {
  try {
    std::string text = inner_.complete(request);
    std::lock_guard lock(mu_);
    recorded_[request.clip_id].push_back(text);
    return text;
  } catch (const TransportError& e) {
    std::lock_guard lock(mu_);
    recorded_[request.clip_id].push_back({{"error", e.what()}});
    throw;
  }
}

json RecordingTransport::fixtures() const {
  std::lock_guard lock(mu_);
  json clips = json::object();
  for (const auto& [id, list] : recorded_) clips[id] = list;
  return {{"clips", clips}};
}

RateLimiter::RateLimiter(double rpm)
    : interval_(rpm > 0.0 ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(60.0 / rpm))
                          : std::chrono::steady_clock::duration::zero()),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

RateLimiter& provider_limiter(const std::string& provider_id, double rpm) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<RateLimiter>> limiters;
  std::lock_guard lock(mu);
  auto& slot = limiters[provider_id];
  if (!slot) slot = std::make_unique<RateLimiter>(rpm);
  return *slot;
}

PromptTemplate default_prompt() {
  return {std::string(kDefaultInstruction), std::string(kDefaultRetry)};
}

PromptTemplate parse_prompt(std::string_view text) {
  // Leading '#' lines are comments (license header, notes).
  while (!text.empty() && text.front() == '#') {
    const auto nl = text.find('\n');
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  PromptTemplate p;
  const auto pos = text.find(kRetryMarker);
  p.instruction = std::string(util::trim(text.substr(0, pos)));
  p.retry_instruction = pos == std::string_view::npos
                            ? default_prompt().retry_instruction
                            : std::string(util::trim(text.substr(pos + kRetryMarker.size())));
  if (p.instruction.empty()) throw ValidationError("prompt asset has an empty instruction");
  return p;
}

PromptTemplate load_prompt(const fs::path& path) { return parse_prompt(util::read_file(path)); }

std::string render_prompt(const std::string& tmpl, const corpus::ClipRecord& record) {
  std::string s = tmpl;
  replace_all(s, "{labels}", known_emotion_names());
  replace_all(s, "{subtitle}", record.subtitle_text.value_or(""));
  return s;
}

std::optional<Emotion> parse_label_response(std::string_view text) {
  std::string_view t = util::trim(text);
  const auto strip = [](char c) {
    return c == '"' || c == '\'' || c == '.' || c == '!' || c == '*' || c == '`' || c == ',';
  };
  while (!t.empty() && strip(t.front())) t.remove_prefix(1);
  while (!t.empty() && strip(t.back())) t.remove_suffix(1);
  return try_parse_emotion_relaxed(t);
}

std::vector<std::size_t> sample_frame_indices(std::size_t n, std::size_t max_frames) {
  std::vector<std::size_t> out;
  if (n == 0 || max_frames == 0) return out;
  const std::size_t m = std::min(n, max_frames);
  for (std::size_t i = 0; i < m; ++i) out.push_back(((2 * i + 1) * n) / (2 * m));
  return out;
}

ClipOutcome classify_clip_llm(const corpus::ClipRecord& record,
                              const std::vector<features::Frame>& frames,
                              const LlmEndpointConfig& cfg, Transport& transport,
                              const PromptTemplate& prompt) {
  ChatRequest req;
  req.clip_id = record.clip_id;
  req.model = cfg.model_name;
  req.temperature = cfg.temperature;
  for (const auto& f : frames) req.images.push_back({"image/png", util::base64_encode(util::encode_png(f))});

  ClipOutcome out;
  std::string last_reply;
  for (std::size_t attempt = 1; attempt <= 2; ++attempt) {
    req.attempt = attempt;
    req.prompt = render_prompt(attempt == 1 ? prompt.instruction : prompt.retry_instruction, record);
    std::optional<std::string> reply;
    std::string transport_error;
    for (std::size_t tries = 0; tries <= cfg.retries; ++tries) {
      if (cfg.requests_per_minute > 0.0) {
        provider_limiter(cfg.provider_id, cfg.requests_per_minute).acquire();
      }
      ++out.requests;
      try {
        reply = transport.complete(req);
        break;
      } catch (const TransportError& e) {
        transport_error = e.what();
      }
    }
    if (!reply) {
      out.status = ClipStatus::kFailed;
      out.detail = transport_error;
      return out;
    }
    if (auto label = parse_label_response(*reply)) {
      out.status = ClipStatus::kPredicted;
      out.prediction = Prediction::from_distribution(record.clip_id, one_hot(*label));
      return out;
    }
    last_reply = *reply;
  }
  out.status = ClipStatus::kUnparsable;
  out.detail = "unparsable reply: " + last_reply.substr(0, 200);
  return out;
}

nlohmann::ordered_json to_json(const LlmRun& run, const LlmEndpointConfig& cfg) {
  nlohmann::ordered_json j;
  j["endpoint"] = to_json(cfg);
  j["predicted"] = run.predictions.size();
  j["unparsable"] = run.unparsable;
  j["failed"] = run.failed;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  for (const auto& [id, d] : run.details) details[id] = d;
  j["details"] = std::move(details);
  return j;
}

LlmRun run_llm_baseline(const std::vector<corpus::ClipRecord>& records,
                        const features::FrameSource& source, const LlmEndpointConfig& cfg,
                        Transport& transport, const PromptTemplate& prompt) {
  validate(cfg);
  std::vector<ClipOutcome> outcomes(records.size());
  auto work = [&](std::size_t i) {
    const auto& r = records[i];
    try {
      if (!source.accepts(r)) throw Error("no_decoder", "no frame source for " + r.video_path);
      std::vector<features::Frame> frames;
      for (std::size_t idx : sample_frame_indices(source.frame_count(r), cfg.max_frames)) {
        frames.push_back(source.frame(r, idx));
      }
      outcomes[i] = classify_clip_llm(r, frames, cfg, transport, prompt);
    } catch (const Error& e) {
      outcomes[i].status = ClipStatus::kFailed;
      outcomes[i].detail = e.what();
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.max_concurrent, records.size()));
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
  LlmRun run;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& o = outcomes[i];
    const auto& id = records[i].clip_id;
    switch (o.status) {
      case ClipStatus::kPredicted:
        run.predictions.push_back(std::move(*o.prediction));
        break;
      case ClipStatus::kUnparsable:
        run.unparsable.push_back(id);
        run.details[id] = o.detail;
        break;
      case ClipStatus::kFailed:
        run.failed.push_back(id);
        run.details[id] = o.detail;
        break;
    }
  }
  return run;
}

}  // namespace signemo::llm
