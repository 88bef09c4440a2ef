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
#include "r2rec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_set>

#include "r2rec/errors.hpp"
#include "r2rec/grpo.hpp"
#include "r2rec/jsonl.hpp"
#include "r2rec/parse.hpp"
#include "r2rec/prompt.hpp"
#include "r2rec/reward.hpp"
#include "r2rec/rng.hpp"
#include "r2rec/svg.hpp"
#include "r2rec/synthetic.hpp"

namespace r2rec::pipeline {

namespace {

namespace fs = std::filesystem;

constexpr int kWorstRank = 20;

std::uint64_t chain_seed(const config::PipelineConfig& cfg,
                         const std::string& user) {
  return derive_seed(cfg.seed, "chains/" + user);
}

std::uint64_t candidate_seed(const config::PipelineConfig& cfg,
                             const std::string& user) {
  return derive_seed(cfg.seed, "candidates/" + user);
}

prompt::RenderOptions render_options(const config::PipelineConfig& cfg) {
  prompt::RenderOptions opts;
  opts.domain = prompt::domain_from_string(cfg.dataset.domain);
  opts.char_budget = static_cast<std::size_t>(cfg.templates.char_budget);
  if (!cfg.templates.dir.empty()) {
    opts.templates = prompt::TemplateSet::load(cfg.templates.dir);
  }
  return opts;
}

Json chain_to_json(const graph::InteractionChain& c) {
  Json j;
  j["u0"] = c.u0;
  j["i0"] = c.i0;
  j["u1"] = c.u1;
  j["i1"] = c.i1;
  j["r_u0_i0"] = c.r_u0_i0;
  j["r_u1_i0"] = c.r_u1_i0;
  j["r_u1_i1"] = c.r_u1_i1;
  j["r_u0_i1"] = c.r_u0_i1;
  return j;
}

graph::InteractionChain chain_from_json(const Json& j) {
  graph::InteractionChain c;
  c.u0 = j.at("u0").get<std::string>();
  c.i0 = j.at("i0").get<std::string>();
  c.u1 = j.at("u1").get<std::string>();
  c.i1 = j.at("i1").get<std::string>();
  c.r_u0_i0 = j.at("r_u0_i0").get<int>();
  c.r_u1_i0 = j.at("r_u1_i0").get<int>();
  c.r_u1_i1 = j.at("r_u1_i1").get<int>();
  c.r_u0_i1 = j.at("r_u0_i1").get<int>();
  return c;
}

/// Marks an aborted artifact instead of deleting it; collected samples are
/// expensive.
void write_incomplete_marker(const std::string& artifact,
                             const std::string& reason) {
  write_text_file(artifact + ".incomplete", reason + "\n");
}

void clear_incomplete_marker(const std::string& artifact) {
  std::error_code ec;
  fs::remove(artifact + ".incomplete", ec);
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads, preserving result
/// order. The first exception wins and is rethrown after all threads join.
template <typename Fn, typename R>
void parallel_index_map(std::size_t n, int workers, Fn&& fn,
                        std::vector<R>* results) {
  results->resize(n);
  const int thread_count =
      static_cast<int>(std::min<std::size_t>(std::max(workers, 1), n));
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      (*results)[i] = fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) {
          return;
        }
        try {
          (*results)[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) {
            error = std::current_exception();
          }
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

corpus::RatingCorpus ingest_corpus(const config::PipelineConfig& cfg) {
  if (cfg.dataset.kind == "synthetic") {
    synthetic::SyntheticConfig scfg;
    scfg.n_users = cfg.dataset.synthetic_users;
    scfg.n_items = cfg.dataset.synthetic_items;
    return synthetic::make_synthetic_corpus(scfg, cfg.seed);
  }
  if (cfg.dataset.kind == "movielens") {
    return corpus::parse_movielens(cfg.dataset.ratings, cfg.dataset.users,
                                   cfg.dataset.movies);
  }
  if (cfg.dataset.kind == "amazon") {
    return corpus::parse_amazon(cfg.dataset.reviews, cfg.dataset.meta);
  }
  throw ConfigError("unknown dataset.kind '" + cfg.dataset.kind + "'");
}

corpus::RatingCorpus require_corpus(const config::PipelineConfig& cfg) {
  const std::string path = cfg.corpus_file();
  if (!fs::exists(path)) {
    throw DataError("corpus artifact missing, run ingest first: " + path);
  }
  return read_corpus(path);
}

}  // namespace

void write_corpus(const corpus::RatingCorpus& corpus,
                  const std::string& path) {
  JsonlWriter writer(path);
  for (const auto& [id, item] : corpus.items) {
    Json j;
    j["type"] = "item";
    j["item_id"] = item.item_id;
    j["title"] = item.title;
    j["attributes"] = item.attributes;
    writer.write(j);
  }
  for (const auto& [id, profile] : corpus.profiles) {
    Json j;
    j["type"] = "user";
    j["user_id"] = profile.user_id;
    j["demographics"] = profile.demographics;
    writer.write(j);
  }
  for (const auto& r : corpus.records) {
    Json j;
    j["type"] = "rating";
    j["user_id"] = r.user_id;
    j["item_id"] = r.item_id;
    j["rating"] = r.rating;
    j["timestamp"] = r.timestamp;
    writer.write(j);
  }
}

corpus::RatingCorpus read_corpus(const std::string& path) {
  corpus::RatingCorpus out;
  for_each_jsonl(path, [&](std::size_t line_no, const Json& rec) {
    const std::string type = rec.value("type", std::string());
    try {
      if (type == "item") {
        corpus::ItemMeta item;
        item.item_id = rec.at("item_id").get<std::string>();
        item.title = rec.at("title").get<std::string>();
        item.attributes =
            rec.at("attributes").get<std::map<std::string, std::string>>();
        out.items.emplace(item.item_id, std::move(item));
      } else if (type == "user") {
        corpus::UserProfile profile;
        profile.user_id = rec.at("user_id").get<std::string>();
        profile.demographics =
            rec.at("demographics").get<std::map<std::string, std::string>>();
        out.profiles.emplace(profile.user_id, std::move(profile));
      } else if (type == "rating") {
        corpus::RatingRecord r;
        r.user_id = rec.at("user_id").get<std::string>();
        r.item_id = rec.at("item_id").get<std::string>();
        r.rating = rec.at("rating").get<int>();
        r.timestamp = rec.at("timestamp").get<std::int64_t>();
        out.records.push_back(std::move(r));
      } else {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": unknown record type '" + type + "'");
      }
    } catch (const Json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

Protocol prepare_protocol(const corpus::RatingCorpus& ingested,
                          const config::PipelineConfig& cfg) {
  Protocol p;
  p.filtered = corpus::filter_users(ingested, cfg.protocol.min_positive,
                                    cfg.protocol.positive_threshold);
  p.split = corpus::split_leave_last_positive(p.filtered);
  p.eval_users = corpus::select_eval_users(
      p.filtered, cfg.protocol.eval_users, derive_seed(cfg.seed, "eval-users"));

  std::unordered_set<std::string> eval_set(p.eval_users.begin(),
                                           p.eval_users.end());
  std::vector<std::string> train_pool;
  for (const auto& [user, entry] : p.split) {
    if (!cfg.protocol.disjoint_train_eval || eval_set.count(user) == 0) {
      train_pool.push_back(user);
    }
  }
  // Seeded shuffle, then cap: which users supply training samples is a
  // uniform draw, independent of id order.
  Rng rng(derive_seed(cfg.seed, "train-users"));
  rng.shuffle(train_pool);
  const std::size_t cap =
      std::min<std::size_t>(train_pool.size(),
                            static_cast<std::size_t>(cfg.protocol.train_samples));
  p.train_users.assign(train_pool.begin(), train_pool.begin() + cap);
  return p;
}

graph::InteractionGraph build_protocol_graph(const Protocol& protocol) {
  std::map<std::string, std::string> excluded;
  for (const auto& [user, entry] : protocol.split) {
    excluded[user] = entry.ground_truth.item_id;
  }
  return graph::build_graph(protocol.filtered, excluded);
}

std::unique_ptr<llm::ChatGateway> make_gateway(
    const config::PipelineConfig& cfg, const std::string& api_key) {
  if (cfg.endpoint.base_url.empty()) {
    std::map<std::string, std::vector<std::string>> script;
    if (!cfg.mock.script.empty()) {
      script = llm::MockGateway::load_script(cfg.mock.script);
    }
    return std::make_unique<llm::MockGateway>(std::move(script),
                                              cfg.mock.fallback);
  }
  llm::EndpointConfig endpoint = cfg.endpoint;
  endpoint.api_key = api_key;
  return std::make_unique<llm::HttpGateway>(std::move(endpoint));
}

void cmd_ingest(const config::PipelineConfig& cfg, std::ostream& out) {
  const corpus::RatingCorpus corpus = ingest_corpus(cfg);
  write_corpus(corpus, cfg.corpus_file());
  out << "ingested " << corpus.profiles.size() << " users, "
      << corpus.items.size() << " items, " << corpus.records.size()
      << " ratings -> " << cfg.corpus_file() << "\n";
  if (corpus.missing_meta_count > 0) {
    out << "warning: " << corpus.missing_meta_count
        << " items lacked metadata (title set to \"unknown\")\n";
  }
  if (corpus.duplicate_dropped > 0) {
    out << "warning: " << corpus.duplicate_dropped
        << " duplicate (user,item,timestamp) records dropped\n";
  }
}

void cmd_sample_chains(const config::PipelineConfig& cfg, std::ostream& out) {
  const corpus::RatingCorpus ingested = require_corpus(cfg);
  const Protocol protocol = prepare_protocol(ingested, cfg);
  const graph::InteractionGraph g = build_protocol_graph(protocol);

  JsonlWriter writer(cfg.chains_file());
  std::size_t total = 0;
  const auto emit = [&](const std::string& user, const char* role) {
    Rng rng(chain_seed(cfg, user));
    const auto chains =
        graph::sample_chains(g, user, cfg.protocol.chains, rng);
    Json j;
    j["user_id"] = user;
    j["role"] = role;
    j["seed"] = cfg.seed;
    j["chains"] = Json::array();
    for (const auto& c : chains) {
      j["chains"].push_back(chain_to_json(c));
    }
    writer.write(j);
    total += chains.size();
  };
  for (const auto& user : protocol.eval_users) {
    emit(user, "eval");
  }
  for (const auto& user : protocol.train_users) {
    emit(user, "train");
  }
  out << "sampled " << total << " chains for " << protocol.eval_users.size()
      << " eval + " << protocol.train_users.size() << " train users -> "
      << cfg.chains_file() << "\n";
}

namespace {

corpus::EvalInstance instance_for(const config::PipelineConfig& cfg,
                                  const corpus::RatingCorpus& ingested,
                                  const Protocol& protocol,
                                  const std::string& user) {
  return corpus::sample_candidates(ingested, user, protocol.split.at(user),
                                   cfg.protocol.n_negatives,
                                   candidate_seed(cfg, user));
}

std::vector<graph::InteractionChain> chains_for(
    const config::PipelineConfig& cfg, const graph::InteractionGraph& g,
    const std::string& user) {
  Rng rng(chain_seed(cfg, user));
  return graph::sample_chains(g, user, cfg.protocol.chains, rng);
}

Json instance_to_json(const corpus::EvalInstance& inst, std::uint64_t seed) {
  Json j;
  j["user_id"] = inst.user_id;
  j["ground_truth_item"] = inst.ground_truth_item;
  j["candidates"] = inst.candidates;
  j["recent_liked"] = inst.recent_liked;
  j["seed"] = seed;
  j["history"] = Json::array();
  for (const auto& h : inst.history) {
    j["history"].push_back({{"item_id", h.item_id},
                            {"rating", h.rating},
                            {"timestamp", h.timestamp}});
  }
  return j;
}

}  // namespace

void cmd_build_prompts(const config::PipelineConfig& cfg, std::ostream& out) {
  const corpus::RatingCorpus ingested = require_corpus(cfg);
  const Protocol protocol = prepare_protocol(ingested, cfg);
  const graph::InteractionGraph g = build_protocol_graph(protocol);
  const prompt::RenderOptions opts = render_options(cfg);

  JsonlWriter instances(cfg.instances_file());
  JsonlWriter prompts(cfg.prompts_file());
  std::size_t n_rank = 0;
  std::size_t n_iot = 0;

  for (const auto& user : protocol.eval_users) {
    const corpus::EvalInstance inst =
        instance_for(cfg, ingested, protocol, user);
    instances.write(instance_to_json(inst, cfg.seed));
    const auto chains = chains_for(cfg, g, user);
    const prompt::PromptText p = prompt::render_rank_prompt(
        inst, chains, protocol.filtered.profiles, ingested.items, opts);
    Json j;
    j["kind"] = "rank";
    j["fingerprint"] = prompt::prompt_fingerprint(p);
    j["system"] = p.system;
    j["user"] = p.user;
    j["meta"] = p.meta;
    j["seed"] = cfg.seed;
    prompts.write(j);
    ++n_rank;
  }

  for (const auto& user : protocol.train_users) {
    const auto chains = chains_for(cfg, g, user);
    for (const auto& chain : chains) {
      const prompt::IotQuery query =
          prompt::forward_unclosed(chain, ingested.items, opts.domain);
      const prompt::PromptText p = prompt::render_iot_prompt(
          query, ingested.items, protocol.filtered.profiles, opts);
      Json j;
      j["kind"] = "iot";
      j["fingerprint"] = prompt::prompt_fingerprint(p);
      j["system"] = p.system;
      j["user"] = p.user;
      j["meta"] = p.meta;
      j["seed"] = cfg.seed;
      prompts.write(j);
      ++n_iot;
    }
  }
  out << "wrote " << n_rank << " rank prompts, " << n_iot
      << " iot prompts -> " << cfg.prompts_file() << "\n";
}

void cmd_generate_iot(const config::PipelineConfig& cfg,
                      llm::ChatGateway& gateway, std::ostream& out) {
  const corpus::RatingCorpus ingested = require_corpus(cfg);
  const Protocol protocol = prepare_protocol(ingested, cfg);
  const graph::InteractionGraph g = build_protocol_graph(protocol);
  const prompt::RenderOptions opts = render_options(cfg);

  // One IoT query per chain, capped at train_samples across users.
  struct Item {
    prompt::IotQuery query;
    prompt::PromptText prompt;
    prompt::PromptText question;
  };
  std::vector<Item> work;
  for (const auto& user : protocol.train_users) {
    if (static_cast<int>(work.size()) >= cfg.protocol.train_samples) {
      break;
    }
    for (const auto& chain : chains_for(cfg, g, user)) {
      if (static_cast<int>(work.size()) >= cfg.protocol.train_samples) {
        break;
      }
      Item item;
      item.query = prompt::forward_unclosed(chain, ingested.items, opts.domain);
      item.prompt = prompt::render_iot_prompt(
          item.query, ingested.items, protocol.filtered.profiles, opts);
      item.question = prompt::render_iot_question(
          item.query, ingested.items, protocol.filtered.profiles, opts);
      work.push_back(std::move(item));
    }
  }

  llm::GenerationParams params = cfg.generation;
  params.n_samples = 1;  // one reasoning trace per chain

  JsonlWriter writer(cfg.triplets_file());
  clear_incomplete_marker(cfg.triplets_file());
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  const std::size_t chunk = 64;
  try {
    for (std::size_t base = 0; base < work.size(); base += chunk) {
      const std::size_t n = std::min(chunk, work.size() - base);
      std::vector<llm::RawResponse> responses;
      parallel_index_map(
          n, cfg.endpoint.max_inflight,
          [&](std::size_t i) {
            return gateway.complete(work[base + i].prompt, params)[0];
          },
          &responses);
      for (std::size_t i = 0; i < n; ++i) {
        const Item& item = work[base + i];
        ++attempted;
        if (responses[i].finish_reason == llm::FinishReason::kError) {
          continue;
        }
        int parsed = 0;
        try {
          parsed = parse::extract_rating(responses[i].text);
        } catch (const ParseError&) {
          continue;  // rejected sample
        }
        if (parsed != item.query.answer) {
          continue;  // answer-consistency filter
        }
        const parse::ReasoningTrace trace =
            parse::extract_reasoning(responses[i].text);
        if (trace.num_steps == 0) {
          continue;  // no usable reasoning
        }
        Json j;
        j["system"] = item.question.system;
        j["question"] = item.question.user;
        j["reasoning"] = trace.raw_span;
        j["answer"] = "Rating " + std::to_string(item.query.answer);
        j["num_steps"] = trace.num_steps;
        Json meta = item.prompt.meta;
        meta["dataset"] = cfg.dataset.kind;
        meta["seed"] = cfg.seed;
        j["meta"] = meta;
        writer.write(j);
        ++accepted;
      }
      writer.flush();
    }
  } catch (const EndpointError& e) {
    writer.flush();
    write_incomplete_marker(cfg.triplets_file(), e.what());
    throw;
  }
  const double rate =
      attempted == 0 ? 0.0
                     : static_cast<double>(accepted) /
                           static_cast<double>(attempted);
  out << "generated " << accepted << " triplets from " << attempted
      << " queries (acceptance rate " << rate << ") -> "
      << cfg.triplets_file() << "\n";
}

void cmd_collect_rollouts(const config::PipelineConfig& cfg,
                          llm::ChatGateway& gateway, std::ostream& out) {
  const corpus::RatingCorpus ingested = require_corpus(cfg);
  const Protocol protocol = prepare_protocol(ingested, cfg);
  const graph::InteractionGraph g = build_protocol_graph(protocol);
  const prompt::RenderOptions opts = render_options(cfg);
  const std::vector<std::string> labels = prompt::candidate_labels(20);

  JsonlWriter writer(cfg.rollouts_file());
  clear_incomplete_marker(cfg.rollouts_file());
  std::size_t groups_written = 0;
  std::size_t groups_discarded = 0;
  std::size_t samples_dropped = 0;

  struct GroupResult {
    std::string user;
    std::string fingerprint;
    std::string gt_label;
    std::vector<llm::RawResponse> responses;
  };

  const std::size_t chunk = 16;
  try {
    for (std::size_t base = 0; base < protocol.train_users.size();
         base += chunk) {
      const std::size_t n =
          std::min(chunk, protocol.train_users.size() - base);
      std::vector<GroupResult> results;
      parallel_index_map(
          n, cfg.endpoint.max_inflight,
          [&](std::size_t i) {
            const std::string& user = protocol.train_users[base + i];
            const corpus::EvalInstance inst =
                instance_for(cfg, ingested, protocol, user);
            const auto chains = chains_for(cfg, g, user);
            const prompt::PromptText p = prompt::render_rank_prompt(
                inst, chains, protocol.filtered.profiles, ingested.items,
                opts);
            GroupResult r;
            r.user = user;
            r.fingerprint = prompt::prompt_fingerprint(p);
            const auto gt_pos =
                std::find(inst.candidates.begin(), inst.candidates.end(),
                          inst.ground_truth_item);
            r.gt_label = labels[static_cast<std::size_t>(
                gt_pos - inst.candidates.begin())];
            r.responses = gateway.complete(p, cfg.generation);
            return r;
          },
          &results);

      for (const auto& result : results) {
        std::vector<std::string> texts;
        std::vector<int> gt_ranks;
        std::vector<int> num_steps;
        for (const auto& response : result.responses) {
          if (response.finish_reason == llm::FinishReason::kError) {
            ++samples_dropped;  // transport failure: sample never happened
            continue;
          }
          int rank = kWorstRank;
          try {
            rank = parse::extract_ranking(response.text, labels,
                                          result.gt_label)
                       .gt_rank;
          } catch (const ParseError&) {
            rank = kWorstRank;  // unparsable ranking scores worst
          }
          texts.push_back(response.text);
          gt_ranks.push_back(rank);
          num_steps.push_back(
              parse::extract_reasoning(response.text).num_steps);
        }
        if (texts.size() < 2) {
          ++groups_discarded;  // advantages undefined below two samples
          continue;
        }
        std::vector<double> totals;
        Json rewards = Json::array();
        for (std::size_t s = 0; s < texts.size(); ++s) {
          const auto breakdown = reward::total_reward(
              reward::step_reward(num_steps[s]),
              reward::correctness_reward(gt_ranks[s]));
          totals.push_back(breakdown.total);
          rewards.push_back({{"step", breakdown.step_reward},
                             {"correctness", breakdown.correctness_reward},
                             {"total", breakdown.total}});
        }
        const std::vector<double> advantages =
            grpo::group_advantages(totals, cfg.grpo.std_floor);

        Json j;
        j["user_id"] = result.user;
        j["prompt_fingerprint"] = result.fingerprint;
        j["gt_label"] = result.gt_label;
        j["group_size"] = texts.size();
        j["texts"] = texts;
        j["gt_ranks"] = gt_ranks;
        j["num_steps"] = num_steps;
        j["rewards"] = rewards;
        j["advantages"] = advantages;
        j["template_version"] = opts.templates.version;
        j["seed"] = cfg.seed;
        writer.write(j);
        ++groups_written;
      }
      writer.flush();
    }
  } catch (const EndpointError& e) {
    writer.flush();
    write_incomplete_marker(cfg.rollouts_file(), e.what());
    throw;
  }
  out << "collected " << groups_written << " rollout groups ("
      << groups_discarded << " discarded, " << samples_dropped
      << " samples dropped) -> " << cfg.rollouts_file() << "\n";
}

metrics::EvalReport cmd_eval(const config::PipelineConfig& cfg,
                             llm::ChatGateway& gateway, std::ostream& out) {
  const corpus::RatingCorpus ingested = require_corpus(cfg);
  const Protocol protocol = prepare_protocol(ingested, cfg);
  const graph::InteractionGraph g = build_protocol_graph(protocol);
  const prompt::RenderOptions opts = render_options(cfg);
  const std::vector<std::string> labels = prompt::candidate_labels(20);

  llm::GenerationParams params = cfg.generation;
  params.n_samples = 1;

  std::vector<std::map<std::string, int>> ranks_per_run;
  try {
    for (int run = 0; run < cfg.protocol.eval_runs; ++run) {
      std::vector<int> ranks;
      parallel_index_map(
          protocol.eval_users.size(), cfg.endpoint.max_inflight,
          [&](std::size_t i) {
            const std::string& user = protocol.eval_users[i];
            const corpus::EvalInstance inst =
                instance_for(cfg, ingested, protocol, user);
            const auto chains = chains_for(cfg, g, user);
            const prompt::PromptText p = prompt::render_rank_prompt(
                inst, chains, protocol.filtered.profiles, ingested.items,
                opts);
            const auto gt_pos =
                std::find(inst.candidates.begin(), inst.candidates.end(),
                          inst.ground_truth_item);
            const std::string gt_label = labels[static_cast<std::size_t>(
                gt_pos - inst.candidates.begin())];
            const auto responses = gateway.complete(p, params);
            if (responses[0].finish_reason == llm::FinishReason::kError) {
              return kWorstRank;
            }
            try {
              return parse::extract_ranking(responses[0].text, labels,
                                            gt_label)
                  .gt_rank;
            } catch (const ParseError&) {
              return kWorstRank;
            }
          },
          &ranks);
      std::map<std::string, int> by_user;
      for (std::size_t i = 0; i < protocol.eval_users.size(); ++i) {
        by_user[protocol.eval_users[i]] = ranks[i];
      }
      ranks_per_run.push_back(std::move(by_user));
      out << "run " << (run + 1) << "/" << cfg.protocol.eval_runs
          << " complete (" << protocol.eval_users.size() << " users)\n";
    }
  } catch (const EndpointError& e) {
    write_incomplete_marker(cfg.report_json_file(), e.what());
    throw;
  }

  const metrics::EvalReport report =
      metrics::aggregate(ranks_per_run, {1, 3, 5, 10});
  Json j;
  j["n_users"] = report.n_users;
  j["n_runs"] = report.n_runs;
  j["seed"] = cfg.seed;
  j["template_version"] = opts.templates.version;
  j["metrics"] = Json::object();
  for (const auto& [name, summary] : report.metrics) {
    j["metrics"][name] = {{"mean", summary.mean},
                          {"std", summary.std_dev},
                          {"per_run", report.per_run.at(name)}};
  }
  write_text_file(cfg.report_json_file(), j.dump(2) + "\n");
  const std::string table = metrics::render_table(report);
  write_text_file(cfg.report_text_file(), table);
  out << table;
  return report;
}

void cmd_toy_grpo(const config::PipelineConfig& cfg, std::ostream& out) {
  grpo::ToyTrainConfig tcfg;
  tcfg.group_size = cfg.toy.group_size;
  tcfg.learning_rate = cfg.toy.learning_rate;
  tcfg.max_grad_norm = cfg.toy.max_grad_norm;
  tcfg.grpo = cfg.grpo;
  Rng rng(derive_seed(cfg.seed, "toy"));
  const auto trajectory =
      grpo::toy_grpo_train(cfg.toy.arms, cfg.toy.steps, tcfg, rng);

  JsonlWriter writer(cfg.trajectory_file());
  svg::Series sampled{"sampled mean", {}, "#2b6cb0"};
  svg::Series expected{"expected", {}, "#c05621"};
  for (const auto& pt : trajectory) {
    Json j;
    j["step"] = pt.step;
    j["mean_reward"] = pt.mean_reward;
    j["expected_reward"] = pt.expected_reward;
    j["seed"] = cfg.seed;
    writer.write(j);
    sampled.values.push_back(pt.mean_reward);
    expected.values.push_back(pt.expected_reward);
  }
  write_text_file(cfg.curve_file(),
                  svg::line_chart("toy GRPO reward", {sampled, expected}));

  const std::size_t window = std::max<std::size_t>(trajectory.size() / 10, 1);
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    first += trajectory[i].expected_reward;
    last += trajectory[trajectory.size() - 1 - i].expected_reward;
  }
  first /= static_cast<double>(window);
  last /= static_cast<double>(window);
  out << "toy GRPO: " << trajectory.size() << " steps, first-window mean "
      << first << ", final-window mean " << last << " -> "
      << cfg.trajectory_file() << ", " << cfg.curve_file() << "\n";
}

void cmd_export(const config::PipelineConfig& cfg, std::ostream& out) {
  Json manifest;
  manifest["seed"] = cfg.seed;
  manifest["dataset"] = cfg.dataset.kind;
  manifest["files"] = Json::object();
  bool any = false;

  const auto check_file = [&](const std::string& path, const char* kind,
                              const auto& validator) {
    if (!fs::exists(path)) {
      return;
    }
    if (fs::exists(path + ".incomplete")) {
      throw DataError(path + " is marked incomplete; regenerate it before "
                      "exporting");
    }
    std::size_t records = 0;
    std::string template_version;
    for_each_jsonl(path, [&](std::size_t line_no, const Json& rec) {
      validator(line_no, rec);
      const auto extract_version = [&](const Json& node) {
        if (node.contains("template_version") &&
            node["template_version"].is_string()) {
          template_version = node["template_version"].get<std::string>();
        }
      };
      extract_version(rec);
      if (rec.contains("meta") && rec["meta"].is_object()) {
        extract_version(rec["meta"]);
      }
      ++records;
    });
    Json entry;
    entry["path"] = path;
    entry["records"] = records;
    if (!template_version.empty()) {
      entry["template_version"] = template_version;
    }
    manifest["files"][kind] = entry;
    any = true;
  };

  check_file(cfg.triplets_file(), "triplets",
             [&](std::size_t line_no, const Json& rec) {
               if (!rec.contains("question") || !rec.contains("reasoning") ||
                   !rec.contains("answer") || !rec.contains("meta") ||
                   !rec["meta"].contains("seed") ||
                   !rec["meta"].contains("template_version")) {
                 throw DataError(cfg.triplets_file() + ":" +
                                 std::to_string(line_no) +
                                 ": triplet record missing required fields");
               }
             });
  check_file(cfg.rollouts_file(), "rollouts",
             [&](std::size_t line_no, const Json& rec) {
               const bool ok =
                   rec.contains("texts") && rec.contains("rewards") &&
                   rec.contains("advantages") && rec.contains("seed") &&
                   rec.contains("template_version") &&
                   rec["texts"].is_array() && rec["rewards"].is_array() &&
                   rec["advantages"].is_array() &&
                   rec["texts"].size() == rec["rewards"].size() &&
                   rec["texts"].size() == rec["advantages"].size();
               if (!ok) {
                 throw DataError(cfg.rollouts_file() + ":" +
                                 std::to_string(line_no) +
                                 ": rollout record missing or inconsistent "
                                 "fields");
               }
             });
  if (fs::exists(cfg.report_json_file())) {
    if (fs::exists(cfg.report_json_file() + ".incomplete")) {
      throw DataError(cfg.report_json_file() + " is marked incomplete");
    }
    manifest["files"]["report"] = {{"path", cfg.report_json_file()}};
    any = true;
  }
  if (!any) {
    throw DataError("nothing to export: no triplet, rollout, or report "
                    "artifacts under " + cfg.output_dir);
  }
  write_text_file(cfg.manifest_file(), manifest.dump(2) + "\n");
  out << "export manifest -> " << cfg.manifest_file() << "\n";
}

}  // namespace r2rec::pipeline
