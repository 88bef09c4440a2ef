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
#ifndef R2REC_PIPELINE_HPP_
#define R2REC_PIPELINE_HPP_

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "r2rec/config.hpp"
#include "r2rec/corpus.hpp"
#include "r2rec/graph.hpp"
#include "r2rec/llm.hpp"
#include "r2rec/metrics.hpp"

namespace r2rec::pipeline {

/// Corpus artifact IO (JSONL, one typed record per line; schema documented
/// in docs/formats.md). Rerunning on unchanged input is byte-identical.
void write_corpus(const corpus::RatingCorpus& corpus, const std::string& path);
corpus::RatingCorpus read_corpus(const std::string& path);

/// Filtered corpus, chronological split, and the seeded train/eval user
/// assignment shared by every downstream command.
struct Protocol {
  corpus::RatingCorpus filtered;
  std::map<std::string, corpus::SplitEntry> split;
  std::vector<std::string> eval_users;
  std::vector<std::string> train_users;  // capped at protocol.train_samples
};

Protocol prepare_protocol(const corpus::RatingCorpus& ingested,
                          const config::PipelineConfig& cfg);

/// Evaluation-time interaction graph: the filtered corpus minus every split
/// user's ground-truth edge, so chains cannot leak the held-out answer.
graph::InteractionGraph build_protocol_graph(const Protocol& protocol);

/// Chooses the gateway: a mock when no endpoint base_url is configured
/// (script optional), otherwise the HTTP client with the given credential.
std::unique_ptr<llm::ChatGateway> make_gateway(
    const config::PipelineConfig& cfg, const std::string& api_key);

// Subcommand bodies. Each throws ConfigError / DataError / EndpointError;
// the CLI maps those to exit codes. `out` receives human-readable progress
// and summary lines.
void cmd_ingest(const config::PipelineConfig& cfg, std::ostream& out);
void cmd_sample_chains(const config::PipelineConfig& cfg, std::ostream& out);
void cmd_build_prompts(const config::PipelineConfig& cfg, std::ostream& out);
void cmd_generate_iot(const config::PipelineConfig& cfg,
                      llm::ChatGateway& gateway, std::ostream& out);
void cmd_collect_rollouts(const config::PipelineConfig& cfg,
                          llm::ChatGateway& gateway, std::ostream& out);
metrics::EvalReport cmd_eval(const config::PipelineConfig& cfg,
                             llm::ChatGateway& gateway, std::ostream& out);
void cmd_toy_grpo(const config::PipelineConfig& cfg, std::ostream& out);
void cmd_export(const config::PipelineConfig& cfg, std::ostream& out);

}  // namespace r2rec::pipeline

#endif  // R2REC_PIPELINE_HPP_
