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

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/corpus/types.hpp"
#include "signemo/error.hpp"
#include "signemo/features/extract.hpp"
#include "signemo/prediction.hpp"

namespace signemo::llm {

struct LlmEndpointConfig {
  std::string provider_id = "openai";
  std::string model_name;
  /// Empty means the provider default.
  std::string base_url;
  std::string api_key_env_var = "OPENAI_API_KEY";
  double temperature = 0.0;
  std::size_t max_frames = 8;
  double timeout_s = 60.0;
  /// Extra attempts after a transport error.
  std::size_t retries = 2;
  std::size_t max_concurrent = 4;
  /// 0 disables rate limiting.
  double requests_per_minute = 0.0;
};

void validate(const LlmEndpointConfig& cfg);
nlohmann::ordered_json to_json(const LlmEndpointConfig& cfg);

struct ChatImage {
  std::string mime_type;
  std::string base64;
};

struct ChatRequest {
  std::string clip_id;
  std::string model;
  double temperature = 0.0;
  std::string prompt;
  std::vector<ChatImage> images;
  /// 1 for the first question, 2 for the parse-failure retry.
  std::size_t attempt = 1;
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what) : Error("transport", what) {}
};

/// One chat-completion round trip. Returns the assistant text or throws
/// TransportError.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

/// Replays recorded responses. Fixture JSON:
///   {"clips": {"<clip_id>": ["text", {"error": "timeout"}, ...]}, "default": [...]}
/// The n-th call for a clip returns the n-th entry; the last entry repeats.
class MockTransport final : public Transport {
 public:
  explicit MockTransport(nlohmann::json fixtures);
  static std::unique_ptr<MockTransport> from_file(const std::filesystem::path& path);

  std::string complete(const ChatRequest& request) override;
  std::size_t calls(const std::string& clip_id) const;

 private:
  nlohmann::json fixtures_;
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> calls_;
};

/// OpenAI-compatible chat completions over HTTP(S). Images are sent as
/// base64 data URLs.
class HttpChatTransport final : public Transport {
 public:
  /// Reads the API key from cfg.api_key_env_var; throws if it is unset.
  explicit HttpChatTransport(const LlmEndpointConfig& cfg);
  std::string complete(const ChatRequest& request) override;

  static nlohmann::json build_body(const ChatRequest& request);
  static std::string extract_text(std::string_view response_body);

 private:
  LlmEndpointConfig cfg_;
  std::string api_key_;
};

/// Forwards to another transport and records every response (or error) into
/// the MockTransport fixture format.
class RecordingTransport final : public Transport {
 public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}
  std::string complete(const ChatRequest& request) override;
  nlohmann::json fixtures() const;

 private:
  Transport& inner_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> recorded_;
};

/// Spaces requests from one provider at least 60/rpm seconds apart.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

/// Process-wide limiter for a provider.
RateLimiter& provider_limiter(const std::string& provider_id, double requests_per_minute);

struct PromptTemplate {
  std::string instruction;
  std::string retry_instruction;
};

/// Built-in prompt text.
PromptTemplate default_prompt();

/// Prompt asset: the instruction, then a line "---retry---", then the retry
/// instruction. "{labels}" and "{subtitle}" are substituted.
PromptTemplate load_prompt(const std::filesystem::path& path);
PromptTemplate parse_prompt(std::string_view text);

std::string render_prompt(const std::string& tmpl, const corpus::ClipRecord& record);

/// A reply parses only if, after trimming whitespace, quotes and trailing
/// punctuation, it is exactly one of the seven label names (any case).
std::optional<Emotion> parse_label_response(std::string_view text);

/// min(max_frames, n) indices spread uniformly: floor((i + 0.5) * n / m).
std::vector<std::size_t> sample_frame_indices(std::size_t n_frames, std::size_t max_frames);

enum class ClipStatus { kPredicted, kUnparsable, kFailed };

struct ClipOutcome {
  ClipStatus status = ClipStatus::kFailed;
  std::optional<Prediction> prediction;
  std::size_t requests = 0;
  std::string detail;
};

ClipOutcome classify_clip_llm(const corpus::ClipRecord& record,
                              const std::vector<features::Frame>& frames,
                              const LlmEndpointConfig& cfg, Transport& transport,
                              const PromptTemplate& prompt = default_prompt());

struct LlmRun {
  std::vector<Prediction> predictions;  // manifest order
  std::vector<std::string> unparsable;
  std::vector<std::string> failed;
  std::map<std::string, std::string> details;
};

nlohmann::ordered_json to_json(const LlmRun& run, const LlmEndpointConfig& cfg);

LlmRun run_llm_baseline(const std::vector<corpus::ClipRecord>& records,
                        const features::FrameSource& frames, const LlmEndpointConfig& cfg,
                        Transport& transport, const PromptTemplate& prompt = default_prompt());

}  // namespace signemo::llm
