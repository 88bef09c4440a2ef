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
#ifndef R2REC_CONFIG_HPP_
#define R2REC_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "r2rec/grpo.hpp"
#include "r2rec/llm.hpp"

namespace r2rec::config {

struct DatasetConfig {
  std::string kind = "synthetic";  // synthetic | movielens | amazon
  std::string domain = "movie";    // prompt wording: movie | item
  std::string ratings;             // movielens paths
  std::string users;
  std::string movies;
  std::string reviews;             // amazon paths
  std::string meta;
  int synthetic_users = 200;
  int synthetic_items = 500;
};

struct ProtocolConfig {
  int min_positive = 6;
  int positive_threshold = 3;
  int n_negatives = 19;
  int eval_users = 1000;
  int eval_runs = 3;
  int train_samples = 500;
  int chains = 5;
  bool disjoint_train_eval = true;
};

struct MockConfig {
  std::string script;  // JSONL fingerprint -> texts; empty = no mock
  std::string fallback = "Ranking:";
};

struct TemplateConfig {
  std::string dir;             // override directory; empty = builtin
  std::uint64_t char_budget = 0;  // 0 = unlimited
};

struct ToyConfig {
  int arms = 20;
  int steps = 500;
  int group_size = 8;
  double learning_rate = 0.1;
  double max_grad_norm = 1.0;
};

struct PipelineConfig {
  std::uint64_t seed = 17;
  DatasetConfig dataset;
  ProtocolConfig protocol;
  llm::GenerationParams generation;  // n_samples acts as rollout group size G
  grpo::GrpoConfig grpo;
  llm::EndpointConfig endpoint;
  MockConfig mock;
  TemplateConfig templates;
  ToyConfig toy;
  std::string output_dir = "out";

  /// Artifact paths, all under output_dir.
  std::string corpus_file() const;
  std::string instances_file() const;
  std::string chains_file() const;
  std::string prompts_file() const;
  std::string triplets_file() const;
  std::string rollouts_file() const;
  std::string report_json_file() const;
  std::string report_text_file() const;
  std::string trajectory_file() const;
  std::string curve_file() const;
  std::string manifest_file() const;

  /// Cross-field checks; with check_input_paths also verifies referenced
  /// input files exist (ingest needs them, later stages work from
  /// artifacts). Throws ConfigError.
  void validate(bool check_input_paths = true) const;
};

/// Reads a JSON config file. Unknown keys are rejected so typos fail loudly.
/// An empty path yields the defaults. The credential is never read from the
/// file; callers inject R2REC_API_KEY.
PipelineConfig load_pipeline_config(const std::string& path);

}  // namespace r2rec::config

#endif  // R2REC_CONFIG_HPP_
