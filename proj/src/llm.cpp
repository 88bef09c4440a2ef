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
#include "r2rec/llm.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <thread>

#include <httplib.h>

#include "r2rec/errors.hpp"
#include "r2rec/jsonl.hpp"

namespace r2rec::llm {

void GenerationParams::validate() const {
  if (temperature < 0.0) {
    throw ConfigError("temperature must be >= 0");
  }
  if (top_p <= 0.0 || top_p > 1.0) {
    throw ConfigError("top_p must be in (0, 1]");
  }
  if (max_tokens < 1) {
    throw ConfigError("max_tokens must be >= 1");
  }
  if (n_samples < 1) {
    throw ConfigError("n_samples must be >= 1");
  }
}

const char* to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::kStop:
      return "stop";
    case FinishReason::kLength:
      return "length";
    case FinishReason::kError:
      return "error";
  }
  return "error";
}

namespace {

/// Counting semaphore bounding outstanding requests across all callers.
class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [this] { return count_ > 0; });
    --count_;
  }

  void release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int count_;
};

struct SemaphoreGuard {
  explicit SemaphoreGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~SemaphoreGuard() { sem_.release(); }
  Semaphore& sem_;
};

bool retriable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

}  // namespace

struct HttpGateway::Impl {
  EndpointConfig config;
  Semaphore inflight;
  std::unique_ptr<JsonlWriter> log;
  std::mutex log_mu;

  explicit Impl(EndpointConfig cfg)
      : config(std::move(cfg)), inflight(std::max(1, config.max_inflight)) {
    if (!config.request_log.empty()) {
      log = std::make_unique<JsonlWriter>(config.request_log);
    }
  }

  void write_log(const Json& record) {
    if (!log) {
      return;
    }
    std::lock_guard<std::mutex> lock(log_mu);
    log->write(record);
    log->flush();
  }

  /// One sample: request/retry loop. Returns an error-marked response when
  /// retries are exhausted; throws EndpointError on auth failure.
  RawResponse fetch_sample(const prompt::PromptText& prompt,
                           const GenerationParams& params) {
    Json body;
    body["model"] = config.model_name;
    body["messages"] = Json::array();
    if (!prompt.system.empty()) {
      body["messages"].push_back({{"role", "system"},
                                  {"content", prompt.system}});
    }
    body["messages"].push_back({{"role", "user"}, {"content", prompt.user}});
    body["temperature"] = params.temperature;
    body["top_p"] = params.top_p;
    body["max_tokens"] = params.max_tokens;
    body["n"] = 1;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!config.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config.api_key);
    }

    RawResponse out;
    out.finish_reason = FinishReason::kError;
    for (int attempt = 0; attempt < std::max(1, config.max_attempts);
         ++attempt) {
      if (attempt > 0) {
        const auto delay = std::chrono::milliseconds(
            static_cast<std::int64_t>(config.retry_base_ms) << (attempt - 1));
        std::this_thread::sleep_for(delay);
      }

      SemaphoreGuard guard(inflight);
      httplib::Client client(config.base_url);
      client.set_connection_timeout(std::chrono::seconds(10));
      client.set_read_timeout(std::chrono::seconds(120));

      const auto start = std::chrono::steady_clock::now();
      httplib::Result res =
          client.Post("/v1/chat/completions", headers, payload,
                      "application/json");
      const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);

      Json log_rec;
      log_rec["prompt_fingerprint"] = prompt::prompt_fingerprint(prompt);
      log_rec["system"] = prompt.system;
      log_rec["prompt"] = prompt.user;
      log_rec["params"] = {{"temperature", params.temperature},
                           {"top_p", params.top_p},
                           {"max_tokens", params.max_tokens}};
      log_rec["attempt"] = attempt;
      log_rec["latency_ms"] = latency.count();

      if (!res) {
        log_rec["error"] = httplib::to_string(res.error());
        write_log(log_rec);
        continue;  // transport error: retry
      }
      log_rec["status"] = res->status;
      if (res->status == 401 || res->status == 403) {
        write_log(log_rec);
        throw EndpointError("authentication rejected (HTTP " +
                            std::to_string(res->status) + ")");
      }
      if (res->status != 200) {
        write_log(log_rec);
        if (retriable_status(res->status)) {
          continue;
        }
        return out;  // permanent request failure: error sample, no retries
      }

      const Json parsed = Json::parse(res->body, nullptr, false);
      if (parsed.is_discarded() || !parsed.contains("choices") ||
          !parsed["choices"].is_array() || parsed["choices"].empty()) {
        log_rec["error"] = "malformed completion body";
        write_log(log_rec);
        continue;
      }
      const Json& choice = parsed["choices"][0];
      if (choice.contains("message") && choice["message"].contains("content") &&
          choice["message"]["content"].is_string()) {
        out.text = choice["message"]["content"].get<std::string>();
      } else if (choice.contains("text") && choice["text"].is_string()) {
        out.text = choice["text"].get<std::string>();
      } else {
        log_rec["error"] = "completion without content";
        write_log(log_rec);
        continue;
      }
      const std::string finish =
          choice.value("finish_reason", std::string("stop"));
      out.finish_reason =
          finish == "length" ? FinishReason::kLength : FinishReason::kStop;
      if (parsed.contains("usage") && parsed["usage"].is_object()) {
        out.usage.prompt_tokens =
            parsed["usage"].value("prompt_tokens", std::int64_t{0});
        out.usage.completion_tokens =
            parsed["usage"].value("completion_tokens", std::int64_t{0});
      }
      out.latency_ms = latency.count();
      log_rec["text"] = out.text;
      write_log(log_rec);
      return out;
    }
    return out;  // retries exhausted: error sample
  }
};

HttpGateway::HttpGateway(EndpointConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  if (impl_->config.base_url.empty()) {
    throw ConfigError("endpoint.base_url is required");
  }
}

HttpGateway::~HttpGateway() = default;

std::vector<RawResponse> HttpGateway::complete(
    const prompt::PromptText& prompt, const GenerationParams& params) {
  params.validate();
  std::vector<RawResponse> out(params.n_samples);
  std::vector<std::exception_ptr> errors(params.n_samples);
  std::vector<std::thread> workers;
  workers.reserve(params.n_samples);
  for (int i = 0; i < params.n_samples; ++i) {
    workers.emplace_back([this, &prompt, &params, &out, &errors, i] {
      try {
        out[i] = impl_->fetch_sample(prompt, params);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) {
    t.join();
  }
  for (const auto& err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }
  const bool all_failed =
      std::all_of(out.begin(), out.end(), [](const RawResponse& r) {
        return r.finish_reason == FinishReason::kError;
      });
  if (all_failed) {
    throw EndpointError("all " + std::to_string(params.n_samples) +
                        " samples failed after retries");
  }
  return out;
}

MockGateway::MockGateway(
    std::map<std::string, std::vector<std::string>> script,
    std::string fallback)
    : script_(std::move(script)), fallback_(std::move(fallback)) {}

std::vector<RawResponse> MockGateway::complete(
    const prompt::PromptText& prompt, const GenerationParams& params) {
  params.validate();
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
  }
  const std::string fp = prompt::prompt_fingerprint(prompt);
  const auto it = script_.find(fp);
  std::vector<RawResponse> out(params.n_samples);
  for (int i = 0; i < params.n_samples; ++i) {
    RawResponse& r = out[i];
    if (it != script_.end() && !it->second.empty()) {
      r.text = it->second[static_cast<std::size_t>(i) % it->second.size()];
    } else {
      r.text = fallback_;
    }
    r.finish_reason = FinishReason::kStop;
    r.latency_ms = 0;
  }
  return out;
}

std::map<std::string, std::vector<std::string>> MockGateway::load_script(
    const std::string& path) {
  std::map<std::string, std::vector<std::string>> script;
  for_each_jsonl(path, [&](std::size_t line_no, const Json& rec) {
    if (!rec.contains("fingerprint") || !rec["fingerprint"].is_string() ||
        !rec.contains("texts") || !rec["texts"].is_array()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": script record needs fingerprint and texts");
    }
    std::vector<std::string> texts;
    for (const Json& t : rec["texts"]) {
      if (!t.is_string()) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": texts must be strings");
      }
      texts.push_back(t.get<std::string>());
    }
    script[rec["fingerprint"].get<std::string>()] = std::move(texts);
  });
  return script;
}

int MockGateway::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

}  // namespace r2rec::llm
