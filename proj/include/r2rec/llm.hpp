/**
 * Copyright 2026 The R2Rec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef R2REC_LLM_HPP_
#define R2REC_LLM_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "r2rec/prompt.hpp"

namespace r2rec::llm {

struct GenerationParams {
  double temperature = 0.6;
  double top_p = 0.9;
  int max_tokens = 1024;
  int n_samples = 1;  // group size when collecting rollouts

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

enum class FinishReason { kStop, kLength, kError };

const char* to_string(FinishReason reason);

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct RawResponse {
  std::string text;
  FinishReason finish_reason = FinishReason::kStop;
  Usage usage;
  std::int64_t latency_ms = 0;
};

/// Uniform gateway to a chat-completion backend. complete() returns exactly
/// params.n_samples responses; a sample that keeps failing after retries
/// comes back with finish_reason = error instead of aborting the group.
/// Terminal conditions (bad credential, every sample failed) throw
/// EndpointError.
class ChatGateway {
 public:
  virtual ~ChatGateway() = default;
  virtual std::vector<RawResponse> complete(const prompt::PromptText& prompt,
                                            const GenerationParams& params) = 0;
};

struct EndpointConfig {
  std::string base_url;    // e.g. "http://localhost:8000"
  std::string model_name;
  std::string api_key;     // taken from R2REC_API_KEY by callers
  int max_inflight = 4;    // bound on concurrently outstanding requests
  int max_attempts = 5;    // per sample, covering transient failures
  int retry_base_ms = 1000;  // exponential backoff: base * 2^attempt
  std::string request_log;   // optional JSONL request/response log path
};

/// JSON-over-HTTP chat-completions client. Each sample is one request so a
/// flaky sample never poisons its group; 408/429/5xx and transport errors
/// retry with exponential backoff, 401/403 throw immediately.
class HttpGateway : public ChatGateway {
 public:
  explicit HttpGateway(EndpointConfig config);
  ~HttpGateway() override;

  std::vector<RawResponse> complete(const prompt::PromptText& prompt,
                                    const GenerationParams& params) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Deterministic offline stand-in. Responses are keyed by the prompt
/// fingerprint; a scripted entry cycles through its texts per sample index.
/// Unscripted prompts get the fallback text. Thread-safe.
class MockGateway : public ChatGateway {
 public:
  /// script: fingerprint -> canned completions (one per sample, cycled).
  MockGateway(std::map<std::string, std::vector<std::string>> script,
              std::string fallback);

  std::vector<RawResponse> complete(const prompt::PromptText& prompt,
                                    const GenerationParams& params) override;

  /// Loads a script from JSONL records {"fingerprint": "...", "texts": [...]}.
  static std::map<std::string, std::vector<std::string>> load_script(
      const std::string& path);

  int calls() const;

 private:
  std::map<std::string, std::vector<std::string>> script_;
  std::string fallback_;
  mutable std::mutex mu_;
  int calls_ = 0;
};

}  // namespace r2rec::llm

#endif  // R2REC_LLM_HPP_
