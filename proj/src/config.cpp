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
#include "r2rec/config.hpp"

#include <filesystem>
#include <set>

#include "r2rec/errors.hpp"
#include "r2rec/jsonl.hpp"

namespace r2rec::config {

namespace {

namespace fs = std::filesystem;

/// Reads known keys out of a JSON object, rejecting unknown ones.
class Section {
 public:
  Section(const Json& obj, std::string name)
      : obj_(obj), name_(std::move(name)) {
    if (!obj_.is_object()) {
      throw ConfigError("config section '" + name_ + "' must be an object");
    }
  }

  ~Section() = default;

  template <typename T>
  void get(const char* key, T* out) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) {
      return;
    }
    try {
      *out = it->get<T>();
    } catch (const Json::exception&) {
      throw ConfigError("config key '" + name_ + "." + key +
                        "' has the wrong type");
    }
  }

  const Json* sub(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (seen_.count(key) == 0) {
        throw ConfigError("unknown config key '" + name_ + "." + key + "'");
      }
    }
  }

 private:
  const Json& obj_;
  std::string name_;
  std::set<std::string> seen_;
};

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) {
    throw ConfigError(what + " path is required");
  }
  if (!fs::exists(path)) {
    throw ConfigError(what + " path does not exist: " + path);
  }
}

}  // namespace

std::string PipelineConfig::corpus_file() const {
  return output_dir + "/corpus.jsonl";
}
std::string PipelineConfig::instances_file() const {
  return output_dir + "/instances.jsonl";
}
std::string PipelineConfig::chains_file() const {
  return output_dir + "/chains.jsonl";
}
std::string PipelineConfig::prompts_file() const {
  return output_dir + "/prompts.jsonl";
}
std::string PipelineConfig::triplets_file() const {
  return output_dir + "/triplets.jsonl";
}
std::string PipelineConfig::rollouts_file() const {
  return output_dir + "/rollouts.jsonl";
}
std::string PipelineConfig::report_json_file() const {
  return output_dir + "/report.json";
}
std::string PipelineConfig::report_text_file() const {
  return output_dir + "/report.txt";
}
std::string PipelineConfig::trajectory_file() const {
  return output_dir + "/toy_trajectory.jsonl";
}
std::string PipelineConfig::curve_file() const {
  return output_dir + "/toy_curve.svg";
}
std::string PipelineConfig::manifest_file() const {
  return output_dir + "/export_manifest.json";
}

void PipelineConfig::validate(bool check_input_paths) const {
  if (dataset.kind == "movielens") {
    if (check_input_paths) {
      require_file(dataset.ratings, "dataset.ratings");
      require_file(dataset.users, "dataset.users");
      require_file(dataset.movies, "dataset.movies");
    }
  } else if (dataset.kind == "amazon") {
    if (check_input_paths) {
      require_file(dataset.reviews, "dataset.reviews");
      if (!dataset.meta.empty()) {
        require_file(dataset.meta, "dataset.meta");
      }
    }
  } else if (dataset.kind != "synthetic") {
    throw ConfigError("dataset.kind must be synthetic, movielens, or amazon");
  }
  if (dataset.domain != "movie" && dataset.domain != "item") {
    throw ConfigError("dataset.domain must be movie or item");
  }
  if (protocol.min_positive < 1 || protocol.positive_threshold < 0 ||
      protocol.positive_threshold > 5) {
    throw ConfigError("protocol filter settings out of range");
  }
  if (protocol.n_negatives < 1 || protocol.eval_users < 1 ||
      protocol.eval_runs < 1 || protocol.train_samples < 0 ||
      protocol.chains < 0) {
    throw ConfigError("protocol counts must be positive");
  }
  generation.validate();
  if (grpo.eps_clip <= 0.0 || grpo.beta < 0.0 || grpo.std_floor <= 0.0) {
    throw ConfigError("grpo settings out of range");
  }
  if (!mock.script.empty()) {
    require_file(mock.script, "mock.script");
  }
  if (!templates.dir.empty() && !fs::is_directory(templates.dir)) {
    throw ConfigError("templates.dir is not a directory: " + templates.dir);
  }
  if (toy.arms < 2 || toy.steps < 1 || toy.group_size < 2 ||
      toy.learning_rate < 0.0) {
    throw ConfigError("toy settings out of range");
  }
  if (output_dir.empty()) {
    throw ConfigError("output dir must be non-empty");
  }
}

PipelineConfig load_pipeline_config(const std::string& path) {
  PipelineConfig cfg;
  if (path.empty()) {
    return cfg;
  }
  if (!fs::exists(path)) {
    throw ConfigError("config file does not exist: " + path);
  }
  const Json root_json = Json::parse(read_text_file(path), nullptr, false);
  if (root_json.is_discarded()) {
    throw ConfigError("config file is not valid JSON: " + path);
  }

  Section root(root_json, "config");
  root.get("seed", &cfg.seed);
  root.get("output_dir", &cfg.output_dir);

  if (const Json* obj = root.sub("dataset")) {
    Section s(*obj, "dataset");
    s.get("kind", &cfg.dataset.kind);
    s.get("domain", &cfg.dataset.domain);
    s.get("ratings", &cfg.dataset.ratings);
    s.get("users", &cfg.dataset.users);
    s.get("movies", &cfg.dataset.movies);
    s.get("reviews", &cfg.dataset.reviews);
    s.get("meta", &cfg.dataset.meta);
    s.get("synthetic_users", &cfg.dataset.synthetic_users);
    s.get("synthetic_items", &cfg.dataset.synthetic_items);
    s.finish();
  }
  if (const Json* obj = root.sub("protocol")) {
    Section s(*obj, "protocol");
    s.get("min_positive", &cfg.protocol.min_positive);
    s.get("positive_threshold", &cfg.protocol.positive_threshold);
    s.get("n_negatives", &cfg.protocol.n_negatives);
    s.get("eval_users", &cfg.protocol.eval_users);
    s.get("eval_runs", &cfg.protocol.eval_runs);
    s.get("train_samples", &cfg.protocol.train_samples);
    s.get("chains", &cfg.protocol.chains);
    s.get("disjoint_train_eval", &cfg.protocol.disjoint_train_eval);
    s.finish();
  }
  if (const Json* obj = root.sub("generation")) {
    Section s(*obj, "generation");
    s.get("temperature", &cfg.generation.temperature);
    s.get("top_p", &cfg.generation.top_p);
    s.get("max_tokens", &cfg.generation.max_tokens);
    s.get("group_size", &cfg.generation.n_samples);
    s.finish();
  }
  if (const Json* obj = root.sub("grpo")) {
    Section s(*obj, "grpo");
    s.get("eps_clip", &cfg.grpo.eps_clip);
    s.get("beta", &cfg.grpo.beta);
    s.get("std_floor", &cfg.grpo.std_floor);
    s.finish();
  }
  if (const Json* obj = root.sub("endpoint")) {
    Section s(*obj, "endpoint");
    s.get("base_url", &cfg.endpoint.base_url);
    s.get("model", &cfg.endpoint.model_name);
    s.get("max_inflight", &cfg.endpoint.max_inflight);
    s.get("max_attempts", &cfg.endpoint.max_attempts);
    s.get("retry_base_ms", &cfg.endpoint.retry_base_ms);
    s.get("request_log", &cfg.endpoint.request_log);
    s.finish();
  }
  if (const Json* obj = root.sub("mock")) {
    Section s(*obj, "mock");
    s.get("script", &cfg.mock.script);
    s.get("fallback", &cfg.mock.fallback);
    s.finish();
  }
  if (const Json* obj = root.sub("templates")) {
    Section s(*obj, "templates");
    s.get("dir", &cfg.templates.dir);
    s.get("char_budget", &cfg.templates.char_budget);
    s.finish();
  }
  if (const Json* obj = root.sub("toy")) {
    Section s(*obj, "toy");
    s.get("arms", &cfg.toy.arms);
    s.get("steps", &cfg.toy.steps);
    s.get("group_size", &cfg.toy.group_size);
    s.get("learning_rate", &cfg.toy.learning_rate);
    s.get("max_grad_norm", &cfg.toy.max_grad_norm);
    s.finish();
  }
  root.finish();
  return cfg;
}

}  // namespace r2rec::config
