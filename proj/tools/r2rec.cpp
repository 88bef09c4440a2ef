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
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "r2rec/config.hpp"
#include "r2rec/errors.hpp"
#include "r2rec/pipeline.hpp"

namespace {

using r2rec::config::PipelineConfig;

/// Flag values gathered before the config file is loaded; set flags win
/// over file values.
struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<std::string> dataset_kind;
  std::optional<std::string> domain;
  std::optional<std::string> ratings, users, movies, reviews, meta;
  std::optional<int> eval_users, eval_runs, train_samples, chains;
  std::optional<int> n_negatives;
  std::optional<int> group_size;
  std::optional<double> temperature, top_p;
  std::optional<int> max_tokens;
  std::optional<std::string> base_url, model;
  std::optional<int> max_inflight, max_attempts, retry_base_ms;
  std::optional<std::string> request_log;
  std::optional<std::string> mock_script, mock_fallback;
  std::optional<std::string> template_dir;
  std::optional<std::uint64_t> char_budget;
  std::optional<int> toy_arms, toy_steps, toy_group;
  std::optional<double> toy_lr;
};

void add_common_options(CLI::App* cmd, Overrides* ov) {
  cmd->add_option("-c,--config", ov->config_path,
                  "JSON config file (flags override file values)");
  cmd->add_option("--seed", ov->seed, "global seed");
  cmd->add_option("-o,--output-dir", ov->output_dir, "artifact directory");
  cmd->add_option("--dataset", ov->dataset_kind,
                  "dataset kind: synthetic | movielens | amazon");
  cmd->add_option("--domain", ov->domain, "prompt wording: movie | item");
  cmd->add_option("--ratings", ov->ratings, "MovieLens ratings.dat path");
  cmd->add_option("--users", ov->users, "MovieLens users.dat path");
  cmd->add_option("--movies", ov->movies, "MovieLens movies.dat path");
  cmd->add_option("--reviews", ov->reviews, "Amazon reviews JSONL path");
  cmd->add_option("--meta", ov->meta, "Amazon metadata JSONL path");
  cmd->add_option("--eval-users", ov->eval_users, "evaluation user count");
  cmd->add_option("--eval-runs", ov->eval_runs, "evaluation run count");
  cmd->add_option("--train-samples", ov->train_samples,
                  "training sample cap");
  cmd->add_option("--chains", ov->chains, "chains per user");
  cmd->add_option("--negatives", ov->n_negatives,
                  "negative candidates per instance");
  cmd->add_option("--group-size", ov->group_size, "rollout group size G");
  cmd->add_option("--temperature", ov->temperature, "sampling temperature");
  cmd->add_option("--top-p", ov->top_p, "nucleus sampling threshold");
  cmd->add_option("--max-tokens", ov->max_tokens, "completion token cap");
  cmd->add_option("--base-url", ov->base_url,
                  "endpoint base URL (empty selects the mock gateway)");
  cmd->add_option("--model", ov->model, "endpoint model name");
  cmd->add_option("--max-inflight", ov->max_inflight,
                  "bound on concurrent requests");
  cmd->add_option("--max-attempts", ov->max_attempts,
                  "attempts per sample incl. retries");
  cmd->add_option("--retry-base-ms", ov->retry_base_ms,
                  "exponential backoff base in ms");
  cmd->add_option("--request-log", ov->request_log,
                  "JSONL request/response log path");
  cmd->add_option("--mock-script", ov->mock_script,
                  "mock script JSONL (fingerprint -> texts)");
  cmd->add_option("--mock-fallback", ov->mock_fallback,
                  "mock text for unscripted prompts");
  cmd->add_option("--template-dir", ov->template_dir,
                  "prompt template override directory");
  cmd->add_option("--char-budget", ov->char_budget,
                  "prompt character budget (0 = unlimited)");
  cmd->add_option("--toy-arms", ov->toy_arms, "toy policy arm count");
  cmd->add_option("--toy-steps", ov->toy_steps, "toy training steps");
  cmd->add_option("--toy-group", ov->toy_group, "toy group size");
  cmd->add_option("--toy-lr", ov->toy_lr, "toy learning rate");
}

PipelineConfig resolve_config(const Overrides& ov, bool check_input_paths) {
  PipelineConfig cfg = r2rec::config::load_pipeline_config(ov.config_path);
  const auto apply = [](const auto& src, auto* dst) {
    if (src) {
      *dst = *src;
    }
  };
  apply(ov.seed, &cfg.seed);
  apply(ov.output_dir, &cfg.output_dir);
  apply(ov.dataset_kind, &cfg.dataset.kind);
  apply(ov.domain, &cfg.dataset.domain);
  apply(ov.ratings, &cfg.dataset.ratings);
  apply(ov.users, &cfg.dataset.users);
  apply(ov.movies, &cfg.dataset.movies);
  apply(ov.reviews, &cfg.dataset.reviews);
  apply(ov.meta, &cfg.dataset.meta);
  apply(ov.eval_users, &cfg.protocol.eval_users);
  apply(ov.eval_runs, &cfg.protocol.eval_runs);
  apply(ov.train_samples, &cfg.protocol.train_samples);
  apply(ov.chains, &cfg.protocol.chains);
  apply(ov.n_negatives, &cfg.protocol.n_negatives);
  apply(ov.group_size, &cfg.generation.n_samples);
  apply(ov.temperature, &cfg.generation.temperature);
  apply(ov.top_p, &cfg.generation.top_p);
  apply(ov.max_tokens, &cfg.generation.max_tokens);
  apply(ov.base_url, &cfg.endpoint.base_url);
  apply(ov.model, &cfg.endpoint.model_name);
  apply(ov.max_inflight, &cfg.endpoint.max_inflight);
  apply(ov.max_attempts, &cfg.endpoint.max_attempts);
  apply(ov.retry_base_ms, &cfg.endpoint.retry_base_ms);
  apply(ov.request_log, &cfg.endpoint.request_log);
  apply(ov.mock_script, &cfg.mock.script);
  apply(ov.mock_fallback, &cfg.mock.fallback);
  apply(ov.template_dir, &cfg.templates.dir);
  apply(ov.char_budget, &cfg.templates.char_budget);
  apply(ov.toy_arms, &cfg.toy.arms);
  apply(ov.toy_steps, &cfg.toy.steps);
  apply(ov.toy_group, &cfg.toy.group_size);
  apply(ov.toy_lr, &cfg.toy.learning_rate);
  cfg.validate(check_input_paths);
  return cfg;
}

std::string api_key_from_env() {
  const char* key = std::getenv("R2REC_API_KEY");
  return key == nullptr ? std::string() : std::string(key);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"R2Rec interaction-chain reasoning pipeline"};
  app.require_subcommand(1);

  Overrides ov;
  std::string selected;
  const auto add_cmd = [&](const char* name, const char* desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common_options(cmd, &ov);
    cmd->callback([&selected, name] { selected = name; });
    return cmd;
  };
  add_cmd("ingest", "parse or synthesize the rating corpus");
  add_cmd("sample-chains", "sample closed interaction chains per user");
  add_cmd("build-prompts", "render evaluation instances and prompts");
  add_cmd("generate-iot", "collect reasoning traces and export triplets");
  add_cmd("collect-rollouts", "collect scored rollout groups");
  add_cmd("eval", "run the ranking evaluation and report metrics");
  add_cmd("toy-grpo", "run the desk-scale GRPO verification task");
  add_cmd("export", "validate artifacts and write the export manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const bool needs_input_paths = selected == "ingest";
    const PipelineConfig cfg = resolve_config(ov, needs_input_paths);
    if (selected == "ingest") {
      r2rec::pipeline::cmd_ingest(cfg, std::cout);
    } else if (selected == "sample-chains") {
      r2rec::pipeline::cmd_sample_chains(cfg, std::cout);
    } else if (selected == "build-prompts") {
      r2rec::pipeline::cmd_build_prompts(cfg, std::cout);
    } else if (selected == "generate-iot") {
      const auto gateway =
          r2rec::pipeline::make_gateway(cfg, api_key_from_env());
      r2rec::pipeline::cmd_generate_iot(cfg, *gateway, std::cout);
    } else if (selected == "collect-rollouts") {
      const auto gateway =
          r2rec::pipeline::make_gateway(cfg, api_key_from_env());
      r2rec::pipeline::cmd_collect_rollouts(cfg, *gateway, std::cout);
    } else if (selected == "eval") {
      const auto gateway =
          r2rec::pipeline::make_gateway(cfg, api_key_from_env());
      r2rec::pipeline::cmd_eval(cfg, *gateway, std::cout);
    } else if (selected == "toy-grpo") {
      r2rec::pipeline::cmd_toy_grpo(cfg, std::cout);
    } else if (selected == "export") {
      r2rec::pipeline::cmd_export(cfg, std::cout);
    }
  } catch (const r2rec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const r2rec::EndpointError& e) {
    std::cerr << "endpoint error: " << e.what() << "\n";
    return 3;
  } catch (const r2rec::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
