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

// Acceptance gate for the release checklist. Each numbered criterion prints
// exactly one [PASS]/[FAIL] line; the process exits nonzero when any fails.
// Every tolerance and runtime budget is pinned here, next to its check, and
// every expected value is recomputed independently of the library code it
// verifies.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "r2rec/config.hpp"
#include "r2rec/corpus.hpp"
#include "r2rec/errors.hpp"
#include "r2rec/graph.hpp"
#include "r2rec/grpo.hpp"
#include "r2rec/jsonl.hpp"
#include "r2rec/llm.hpp"
#include "r2rec/metrics.hpp"
#include "r2rec/parse.hpp"
#include "r2rec/pipeline.hpp"
#include "r2rec/prompt.hpp"
#include "r2rec/reward.hpp"
#include "r2rec/rng.hpp"
#include "r2rec/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using r2rec::Json;
using r2rec::Rng;
using r2rec::derive_seed;

constexpr std::uint64_t kSeed = 17;

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& prefix) {
    const auto stamp = Clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() / (prefix + "-" + std::to_string(stamp));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

/// First failure wins; later checks keep running so the binary never stops
/// at criterion granularity.
struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) {
    sum += x;
  }
  return sum / static_cast<double>(v.size());
}

double pop_std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) {
    ss += (x - m) * (x - m);
  }
  return std::sqrt(ss / static_cast<double>(v.size()));
}

/// Occurrences of digit `c` with no digit neighbor, so "25" never counts as
/// a "2" or a "5".
int standalone_count(const std::string& text, char c) {
  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != c) {
      continue;
    }
    const bool left = i > 0 && std::isdigit(static_cast<unsigned char>(text[i - 1]));
    const bool right = i + 1 < text.size() &&
                       std::isdigit(static_cast<unsigned char>(text[i + 1]));
    if (!left && !right) {
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Criterion 1: reward table conformance. Exact equality, no tolerance.

double expected_correctness(int rank) {
  if (rank == 1) return 1.0;
  if (rank <= 3) return 0.7;
  if (rank <= 5) return 0.5;
  if (rank <= 10) return 0.2;
  return 0.0;
}

Verdict criterion_reward() {
  Verdict v;
  for (int rank = 1; rank <= 20; ++rank) {
    v.require(r2rec::reward::correctness_reward(rank) ==
                  expected_correctness(rank),
              "correctness_reward mismatch at rank " + std::to_string(rank));
  }
  for (int n = 0; n <= 10; ++n) {
    v.require(r2rec::reward::step_reward(n) ==
                  std::min(1.0, static_cast<double>(n) / 4.0),
              "step_reward mismatch at n=" + std::to_string(n));
  }
  Rng rng(derive_seed(kSeed, "acceptance/reward"));
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.below(11));
    const int rank = 1 + static_cast<int>(rng.below(20));
    const double s = r2rec::reward::step_reward(n);
    const double c = r2rec::reward::correctness_reward(rank);
    const auto breakdown = r2rec::reward::total_reward(s, c);
    v.require(breakdown.total == s + 2.0 * c,
              "total != step + 2*correctness at n=" + std::to_string(n) +
                  " rank=" + std::to_string(rank));
    v.require(breakdown.total >= 0.0 && breakdown.total <= 3.0,
              "total out of [0,3]");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 2: GRPO numerics.

Verdict criterion_grpo() {
  Verdict v;
  constexpr double kMomentTol = 1e-9;
  constexpr double kGradRelTol = 1e-4;
  constexpr double kStdFloor = 1e-8;

  Rng rng(derive_seed(kSeed, "acceptance/grpo"));
  for (int trial = 0; trial < 1000; ++trial) {
    const int g = 2 + static_cast<int>(rng.below(15));
    std::vector<double> rewards;
    for (int i = 0; i < g; ++i) {
      rewards.push_back(3.0 * rng.real01());
    }
    const auto adv = r2rec::grpo::group_advantages(rewards, kStdFloor);
    if (pop_std_of(rewards) > kStdFloor) {
      v.require(std::abs(mean_of(adv)) < kMomentTol,
                "advantage mean off at trial " + std::to_string(trial));
      v.require(std::abs(pop_std_of(adv) - 1.0) < kMomentTol,
                "advantage std off at trial " + std::to_string(trial));
    }
  }

  // Analytic gradient of the toy surrogate against central differences.
  r2rec::grpo::GrpoConfig gcfg;
  const int dim = 6;
  const int group = 5;
  const double uniform_logp = -std::log(static_cast<double>(dim));
  int checked = 0;
  int attempts = 0;
  while (checked < 10 && attempts < 200) {
    ++attempts;
    std::vector<double> sample_logits(dim);
    for (auto& x : sample_logits) {
      x = 0.5 * rng.normal();
    }
    const auto sample_probs = r2rec::grpo::softmax(sample_logits);
    std::vector<int> arms;
    std::vector<double> logp_old;
    std::vector<double> rewards;
    for (int i = 0; i < group; ++i) {
      const int arm = static_cast<int>(rng.categorical(sample_probs));
      arms.push_back(arm);
      logp_old.push_back(std::log(sample_probs[arm]));
      rewards.push_back(3.0 * rng.real01());
    }
    const auto advantages = r2rec::grpo::group_advantages(rewards, kStdFloor);
    std::vector<double> logits = sample_logits;
    for (auto& x : logits) {
      x += 0.05 * rng.normal();
    }
    std::vector<double> logp_ref(group, uniform_logp);

    // Skip points whose importance ratio sits on a clip kink, where the
    // objective is not differentiable and finite differences are undefined.
    const auto probs = r2rec::grpo::softmax(logits);
    bool near_kink = false;
    for (int i = 0; i < group; ++i) {
      const double rho = std::exp(std::log(probs[arms[i]]) - logp_old[i]);
      if (std::abs(rho - (1.0 - gcfg.eps_clip)) < 1e-3 ||
          std::abs(rho - (1.0 + gcfg.eps_clip)) < 1e-3) {
        near_kink = true;
      }
    }
    if (near_kink) {
      continue;
    }
    ++checked;

    const auto grad = r2rec::grpo::toy_surrogate_gradient(
        logits, arms, advantages, logp_old, logp_ref, gcfg);
    const double h = 1e-5;
    for (int j = 0; j < dim; ++j) {
      auto plus = logits;
      auto minus = logits;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (r2rec::grpo::toy_surrogate(plus, arms, advantages,
                                                    logp_old, logp_ref, gcfg) -
                         r2rec::grpo::toy_surrogate(minus, arms, advantages,
                                                    logp_old, logp_ref, gcfg)) /
                        (2.0 * h);
      const double denom =
          std::max({std::abs(fd), std::abs(grad[j]), 1e-8});
      v.require(std::abs(fd - grad[j]) / denom < kGradRelTol,
                "gradient mismatch at point " + std::to_string(checked) +
                    " coord " + std::to_string(j));
    }
  }
  v.require(checked == 10, "could not place 10 gradient check points");

  for (int trial = 0; trial < 10000; ++trial) {
    const int len = 1 + static_cast<int>(rng.below(8));
    std::vector<double> pol;
    std::vector<double> ref;
    for (int t = 0; t < len; ++t) {
      pol.push_back(-std::abs(rng.normal()) - 1e-3);
      ref.push_back(-std::abs(rng.normal()) - 1e-3);
    }
    v.require(r2rec::grpo::kl_estimate(pol, ref) >= 0.0,
              "negative kl estimate at trial " + std::to_string(trial));
    v.require(r2rec::grpo::kl_estimate(pol, pol) == 0.0,
              "kl(p,p) != 0 at trial " + std::to_string(trial));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 3: toy GRPO learning with the default 20-arm task.

double window_gap(const std::vector<r2rec::grpo::TrajectoryPoint>& traj) {
  const std::size_t window = std::max<std::size_t>(traj.size() / 10, 1);
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    first += traj[i].expected_reward;
    last += traj[traj.size() - 1 - i].expected_reward;
  }
  return (last - first) / static_cast<double>(window);
}

Verdict criterion_toy_learning() {
  Verdict v;
  constexpr double kMinGap = 0.5;
  constexpr double kAnchoredMaxGap = 0.1;

  r2rec::grpo::ToyTrainConfig tcfg;
  Rng rng(derive_seed(kSeed, "toy"));
  const auto traj = r2rec::grpo::toy_grpo_train(20, 500, tcfg, rng);
  v.require(traj.size() == 500, "trajectory length != 500");
  const double gap = window_gap(traj);
  v.require(gap >= kMinGap,
            "learning gap " + std::to_string(gap) + " below 0.5");

  r2rec::grpo::ToyTrainConfig anchored = tcfg;
  anchored.grpo.beta = 1000.0;
  Rng rng2(derive_seed(kSeed, "toy"));
  const auto flat = r2rec::grpo::toy_grpo_train(20, 500, anchored, rng2);
  const double anchored_gap = std::abs(window_gap(flat));
  v.require(anchored_gap < kAnchoredMaxGap,
            "anchored gap " + std::to_string(anchored_gap) + " not below 0.1");
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 4: closure-constrained sampling against a brute-force oracle.

Verdict criterion_graph_oracle() {
  Verdict v;
  Rng rng(derive_seed(kSeed, "acceptance/graph"));
  int chains_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n_users = 2 + static_cast<int>(rng.below(49));
    const int n_items = 1 + static_cast<int>(rng.below(50));
    const double density = 0.05 + 0.15 * rng.real01();
    r2rec::corpus::RatingCorpus corpus;
    for (int u = 0; u < n_users; ++u) {
      const std::string user = "u" + std::to_string(u);
      corpus.profiles[user] = {user, {}};
      for (int i = 0; i < n_items; ++i) {
        if (rng.real01() < density) {
          const std::string item = "i" + std::to_string(i);
          corpus.items[item] = {item, "Title " + item, {}};
          corpus.records.push_back(
              {user, item, 1 + static_cast<int>(rng.below(5)),
               static_cast<std::int64_t>(corpus.records.size())});
        }
      }
    }
    const auto g = r2rec::graph::build_graph(corpus);

    for (const auto& [u0, items_u0] : g.user_adj) {
      // Literal definition: union over u0's item pairs of the users rating
      // both items.
      std::vector<std::string> item_list;
      for (const auto& [item, rating] : items_u0) {
        item_list.push_back(item);
      }
      std::set<std::string> brute;
      for (std::size_t a = 0; a < item_list.size(); ++a) {
        for (std::size_t b = a + 1; b < item_list.size(); ++b) {
          for (const auto& [w, rating] : g.item_adj.at(item_list[a])) {
            if (w != u0 && g.item_adj.at(item_list[b]).count(w) > 0) {
              brute.insert(w);
            }
          }
        }
      }
      const auto got = r2rec::graph::candidate_users(g, u0);
      v.require(std::set<std::string>(got.begin(), got.end()) == brute,
                "candidate set mismatch for " + u0 + " in trial " +
                    std::to_string(trial));
      v.require(std::is_sorted(got.begin(), got.end()),
                "candidate set not ascending for " + u0);

      if (brute.empty()) {
        continue;
      }
      const auto chain = r2rec::graph::sample_chain(g, u0, rng);
      v.require(chain.u0 == u0 && chain.u1 != u0 && chain.i0 != chain.i1,
                "chain endpoints malformed in trial " + std::to_string(trial));
      v.require(brute.count(chain.u1) == 1,
                "chain peer not a candidate in trial " + std::to_string(trial));
      const auto edge = [&](const std::string& user, const std::string& item,
                            int rating) {
        const auto it = g.user_adj.find(user);
        return it != g.user_adj.end() && it->second.count(item) > 0 &&
               it->second.at(item) == rating;
      };
      v.require(edge(chain.u0, chain.i0, chain.r_u0_i0) &&
                    edge(chain.u1, chain.i0, chain.r_u1_i0) &&
                    edge(chain.u1, chain.i1, chain.r_u1_i1) &&
                    edge(chain.u0, chain.i1, chain.r_u0_i1),
                "chain violates four-edge closure in trial " +
                    std::to_string(trial));
      ++chains_checked;
    }
  }
  v.require(chains_checked > 100, "too few chains exercised the closure check");
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 5: ranking metric identities.

Verdict criterion_metrics() {
  Verdict v;
  constexpr double kNdcgTol = 1e-5;
  Rng rng(derive_seed(kSeed, "acceptance/metrics"));
  for (int trial = 0; trial < 10000; ++trial) {
    const int rank = 1 + static_cast<int>(rng.below(1000));
    v.require(r2rec::metrics::ndcg_at_k(rank, 1) ==
                  r2rec::metrics::hit_at_k(rank, 1),
              "ndcg@1 != hit@1 at rank " + std::to_string(rank));
  }
  const double got = r2rec::metrics::ndcg_at_k(2, 3);
  v.require(std::abs(got - 0.63093) <= kNdcgTol,
            "ndcg@3 at rank 2 is " + std::to_string(got));
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 6: evaluation protocol conformance on the bundled synthetic
// corpus.

Verdict criterion_protocol() {
  Verdict v;
  r2rec::synthetic::SyntheticConfig scfg;  // 200 users, 500 items
  const auto corpus = r2rec::synthetic::make_synthetic_corpus(scfg, kSeed);
  v.require(corpus.profiles.size() == 200 && corpus.items.size() == 500,
            "unexpected synthetic corpus shape");

  const auto filtered = r2rec::corpus::filter_users(corpus, 6, 3);

  // Independent scan of the raw records.
  std::map<std::string, int> positives;
  std::map<std::string, std::set<std::string>> seen_items;
  for (const auto& r : corpus.records) {
    if (r.rating > 3) {
      ++positives[r.user_id];
    }
    seen_items[r.user_id].insert(r.item_id);
  }
  std::set<std::string> expected_users;
  for (const auto& [user, count] : positives) {
    if (count >= 6) {
      expected_users.insert(user);
    }
  }
  std::set<std::string> kept_users;
  for (const auto& [user, profile] : filtered.profiles) {
    kept_users.insert(user);
  }
  v.require(kept_users == expected_users,
            "filter kept a different user set than the independent scan");
  std::set<std::string> items_with_records;
  for (const auto& r : filtered.records) {
    v.require(expected_users.count(r.user_id) == 1,
              "filtered records include a dropped user");
    items_with_records.insert(r.item_id);
  }
  for (const auto& [item, meta] : filtered.items) {
    v.require(items_with_records.count(item) == 1,
              "filtered items include an item with no records");
  }

  const auto split = r2rec::corpus::split_leave_last_positive(filtered);
  v.require(split.size() == expected_users.size(),
            "split skipped a filtered user");
  for (const auto& [user, entry] : split) {
    const auto inst = r2rec::corpus::sample_candidates(
        filtered, user, entry, 19, derive_seed(kSeed, "candidates/" + user));
    v.require(inst.candidates.size() == 20,
              "candidate set size != 20 for " + user);
    int interacted = 0;
    for (const auto& item : inst.candidates) {
      if (seen_items.at(user).count(item) > 0) {
        ++interacted;
        v.require(item == entry.ground_truth.item_id,
                  "an interacted non-ground-truth item leaked into the "
                  "candidates of " + user);
      }
    }
    v.require(interacted == 1,
              "candidate set of " + user + " holds " +
                  std::to_string(interacted) + " positives");
  }

  // Full regeneration under the same seed is byte-identical.
  TempDir dir("r2rec-acceptance-protocol");
  const auto corpus2 = r2rec::synthetic::make_synthetic_corpus(scfg, kSeed);
  r2rec::pipeline::write_corpus(corpus, dir.file("a.jsonl"));
  r2rec::pipeline::write_corpus(corpus2, dir.file("b.jsonl"));
  v.require(r2rec::read_text_file(dir.file("a.jsonl")) ==
                r2rec::read_text_file(dir.file("b.jsonl")),
            "synthetic corpus regeneration is not byte-identical");
  for (const auto& [user, entry] : split) {
    const auto a = r2rec::corpus::sample_candidates(
        filtered, user, entry, 19, derive_seed(kSeed, "candidates/" + user));
    const auto b = r2rec::corpus::sample_candidates(
        filtered, user, entry, 19, derive_seed(kSeed, "candidates/" + user));
    v.require(a.candidates == b.candidates && a.recent_liked == b.recent_liked,
              "instance resampling is not deterministic for " + user);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: masking soundness of generated reasoning prompts.
//
// The prompt template itself spells out the rating scale and a worked
// example, so some standalone digits are boilerplate shared by every
// prompt. The answer-occurrence checks are therefore differential: render
// the same query with the true answer and with a mutated one, and require
// the two prompts to differ in exactly the one answer byte. The chain and
// question renderings must not depend on the answer at all, and on chains
// whose visible hop ratings do not collide with the answer the digit must
// be absent from them outright.

Verdict criterion_masking() {
  Verdict v;
  constexpr int kPrompts = 500;

  r2rec::synthetic::SyntheticConfig scfg;
  const auto corpus = r2rec::synthetic::make_synthetic_corpus(scfg, kSeed);
  const auto filtered = r2rec::corpus::filter_users(corpus, 6, 3);
  const auto split = r2rec::corpus::split_leave_last_positive(filtered);
  std::map<std::string, std::string> excluded;
  for (const auto& [user, entry] : split) {
    excluded[user] = entry.ground_truth.item_id;
  }
  const auto g = r2rec::graph::build_graph(filtered, excluded);
  const r2rec::prompt::RenderOptions opts;

  const std::vector<std::string> rules = {
      "progressive",
      "masked",
      "should not contain any information about the final answer",
      "consistent with the correct one",
  };

  int rendered = 0;
  int literal_checked = 0;
  for (int round = 0; round < 4 && rendered < kPrompts; ++round) {
    for (const auto& [user, entry] : split) {
      if (rendered >= kPrompts) {
        break;
      }
      Rng rng(derive_seed(kSeed, "acceptance/masking/" + user + "/" +
                                     std::to_string(round)));
      const auto chains = r2rec::graph::sample_chains(g, user, 2, rng);
      for (const auto& chain : chains) {
        if (rendered >= kPrompts) {
          break;
        }
        const auto query =
            r2rec::prompt::forward_unclosed(chain, filtered.items,
                                            opts.domain);
        auto mutated = query;
        mutated.answer = query.answer == 5 ? 4 : query.answer + 1;
        const auto pa = r2rec::prompt::render_iot_prompt(
            query, filtered.items, filtered.profiles, opts);
        const auto pb = r2rec::prompt::render_iot_prompt(
            mutated, filtered.items, filtered.profiles, opts);
        ++rendered;

        const std::string full_a = pa.full();
        const std::string full_b = pb.full();
        const char digit_a = static_cast<char>('0' + query.answer);
        const char digit_b = static_cast<char>('0' + mutated.answer);

        // Exactly one byte of the prompt carries the answer.
        v.require(full_a.size() == full_b.size(),
                  "prompt length depends on the answer value");
        std::size_t diffs = 0;
        std::size_t diff_pos = 0;
        for (std::size_t i = 0; i < full_a.size() && i < full_b.size(); ++i) {
          if (full_a[i] != full_b[i]) {
            ++diffs;
            diff_pos = i;
          }
        }
        v.require(diffs == 1, "answer appears in " + std::to_string(diffs) +
                                  " positions instead of 1");
        if (diffs == 1) {
          v.require(full_a[diff_pos] == digit_a && full_b[diff_pos] == digit_b,
                    "the differing byte is not the answer digit");
          const std::string marker = "Answer:\nRating ";
          const auto slot = full_a.rfind(marker);
          v.require(slot != std::string::npos &&
                        slot + marker.size() == diff_pos,
                    "the answer byte sits outside the answer line");
        }
        v.require(standalone_count(full_a, digit_a) -
                          standalone_count(full_b, digit_a) == 1,
                  "differential standalone count of the answer digit != 1");

        // Chain and question renderings are answer-independent, and clean
        // of the digit whenever no visible hop rating collides with it.
        const std::string chain_text = r2rec::prompt::render_chain(
            chain, filtered.items, filtered.profiles, false, opts.domain);
        v.require(query.question == mutated.question,
                  "question text depends on the answer");
        for (char c : query.question) {
          v.require(!std::isdigit(static_cast<unsigned char>(c)),
                    "question text contains a digit");
        }
        const bool collision = chain.r_u0_i0 == query.answer ||
                               chain.r_u1_i0 == query.answer ||
                               chain.r_u1_i1 == query.answer;
        if (!collision) {
          ++literal_checked;
          v.require(standalone_count(chain_text, digit_a) == 0,
                    "answer digit leaked into the chain rendering");
        }

        for (const auto& rule : rules) {
          v.require(full_a.find(rule) != std::string::npos,
                    "requirement rule missing: " + rule);
        }
        for (const char* marker : {"\n1. ", "\n2. ", "\n3. ", "\n4. "}) {
          v.require(full_a.find(marker) != std::string::npos,
                    std::string("requirement marker missing: ") + marker);
        }
      }
    }
  }
  v.require(rendered == kPrompts,
            "rendered only " + std::to_string(rendered) + " prompts");
  v.require(literal_checked > 100,
            "too few collision-free chains for the literal absence check");
  return v;
}

// ---------------------------------------------------------------------------
// Criteria 8 and 9: scripted end-to-end run plus the export contract.

struct EndToEnd {
  bool ran = false;
  std::string manifest_path;
  std::size_t triplet_records = 0;
  std::size_t rollout_records = 0;
  std::optional<TempDir> dir;
};

EndToEnd g_e2e;

int answer_in_prompt(const std::string& user_text) {
  const std::string marker = "Answer:\nRating ";
  const auto pos = user_text.rfind(marker);
  if (pos == std::string::npos) {
    return -1;
  }
  return user_text[pos + marker.size()] - '0';
}

std::string rank_reply(const std::vector<std::string>& labels,
                       const std::string& gt_label, int rank) {
  std::vector<std::string> order;
  for (const auto& label : labels) {
    if (label != gt_label) {
      order.push_back(label);
    }
  }
  order.insert(order.begin() + (rank - 1), gt_label);
  std::string text =
      "1. The chains point at one steady taste.\n"
      "2. The liked titles repeat that taste.\n"
      "3. A few candidates echo it closely.\n"
      "4. The closest match goes first.\n"
      "Ranking: ";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) {
      text += ", ";
    }
    text += order[i];
  }
  return text;
}

Verdict criterion_end_to_end() {
  Verdict v;
  constexpr double kMetricTol = 1e-12;
  const auto start = Clock::now();

  g_e2e.dir.emplace("r2rec-acceptance-e2e");
  r2rec::config::PipelineConfig cfg;
  cfg.seed = kSeed;
  cfg.output_dir = g_e2e.dir->file("out");
  cfg.dataset.kind = "synthetic";
  cfg.protocol.eval_users = 60;
  cfg.protocol.train_samples = 30;
  cfg.protocol.chains = 5;
  cfg.protocol.eval_runs = 3;
  cfg.generation.n_samples = 4;

  std::ostringstream log;
  r2rec::pipeline::cmd_ingest(cfg, log);
  r2rec::pipeline::cmd_sample_chains(cfg, log);
  r2rec::pipeline::cmd_build_prompts(cfg, log);

  // Script the mock from the stored artifacts.
  std::vector<Json> prompts;
  r2rec::for_each_jsonl(cfg.prompts_file(), [&](std::size_t, const Json& rec) {
    prompts.push_back(rec);
  });
  std::vector<Json> instances;
  r2rec::for_each_jsonl(cfg.instances_file(),
                        [&](std::size_t, const Json& rec) {
                          instances.push_back(rec);
                        });
  v.require(instances.size() == 60, "expected 60 evaluation instances");

  const auto labels = r2rec::prompt::candidate_labels(20);
  const std::vector<int> rank_cycle = {1, 2, 3, 5, 8, 13, 20, 4, 11, 7};
  std::map<std::string, std::vector<std::string>> script;
  std::vector<int> assigned_ranks;

  std::size_t rank_index = 0;
  for (const auto& rec : prompts) {
    const auto kind = rec.at("kind").get<std::string>();
    const auto fp = rec.at("fingerprint").get<std::string>();
    if (kind == "iot") {
      const int answer = answer_in_prompt(rec.at("user").get<std::string>());
      v.require(answer >= 1 && answer <= 5,
                "could not recover the masked answer from a stored prompt");
      script[fp] = {
          "1. The target user favors the shared title's style.\n"
          "2. The peer user rates that style lower.\n"
          "3. The masked title matches the target's style.\n"
          "4. So the target leans positive.\n"
          "Rating " + std::to_string(answer)};
      continue;
    }
    // Rank prompts appear in instance order; recover the gt label and pin
    // this user's rank from the cycle.
    const auto& inst = instances.at(rank_index);
    const auto candidates =
        inst.at("candidates").get<std::vector<std::string>>();
    const auto gt = inst.at("ground_truth_item").get<std::string>();
    const auto pos = std::find(candidates.begin(), candidates.end(), gt);
    v.require(pos != candidates.end(), "instance lost its ground truth");
    const std::string gt_label =
        labels[static_cast<std::size_t>(pos - candidates.begin())];
    const int rank = rank_cycle[rank_index % rank_cycle.size()];
    assigned_ranks.push_back(rank);
    script[fp] = {rank_reply(labels, gt_label, rank)};
    ++rank_index;
  }
  v.require(rank_index == 60, "expected one rank prompt per instance");

  r2rec::llm::MockGateway gateway(script, "Ranking:");
  r2rec::pipeline::cmd_generate_iot(cfg, gateway, log);
  std::size_t triplets = 0;
  r2rec::for_each_jsonl(cfg.triplets_file(),
                        [&](std::size_t, const Json&) { ++triplets; });
  v.require(triplets == 30, "expected the training cap of 30 triplets, got " +
                                std::to_string(triplets));

  // Rollouts reuse the ranking script; every train-user prompt is
  // unscripted and falls back, which still exercises parse -> reward ->
  // advantage on full groups.
  r2rec::pipeline::cmd_collect_rollouts(cfg, gateway, log);
  std::size_t rollouts = 0;
  r2rec::for_each_jsonl(cfg.rollouts_file(),
                        [&](std::size_t, const Json&) { ++rollouts; });
  v.require(rollouts == 30, "expected 30 rollout groups, got " +
                                std::to_string(rollouts));

  const auto report = r2rec::pipeline::cmd_eval(cfg, gateway, log);
  v.require(report.n_users == 60 && report.n_runs == 3,
            "report shape mismatch");

  // Independent brute-force scorer over the ranks the script pinned.
  for (int k : {1, 3, 5, 10}) {
    double hit = 0.0;
    double ndcg = 0.0;
    for (int rank : assigned_ranks) {
      if (rank <= k) {
        hit += 1.0;
        ndcg += 1.0 / std::log2(static_cast<double>(rank) + 1.0);
      }
    }
    hit /= static_cast<double>(assigned_ranks.size());
    ndcg /= static_cast<double>(assigned_ranks.size());
    const auto& hit_summary = report.metrics.at("hit@" + std::to_string(k));
    const auto& ndcg_summary = report.metrics.at("ndcg@" + std::to_string(k));
    v.require(std::abs(hit_summary.mean - hit) < kMetricTol,
              "hit@" + std::to_string(k) + " differs from the brute-force "
              "scorer");
    v.require(std::abs(ndcg_summary.mean - ndcg) < kMetricTol,
              "ndcg@" + std::to_string(k) + " differs from the brute-force "
              "scorer");
    v.require(std::abs(hit_summary.std_dev) < kMetricTol &&
                  std::abs(ndcg_summary.std_dev) < kMetricTol,
              "scripted runs should agree exactly across repeats");
  }

  r2rec::pipeline::cmd_export(cfg, log);
  g_e2e.ran = v.ok;
  g_e2e.manifest_path = cfg.manifest_file();
  g_e2e.triplet_records = triplets;
  g_e2e.rollout_records = rollouts;

  const double elapsed =
      std::chrono::duration<double>(Clock::now() - start).count();
  v.require(elapsed < 120.0, "end-to-end run took " +
                                 std::to_string(elapsed) + "s");
  return v;
}

Verdict criterion_export_contract() {
  Verdict v;
  v.require(g_e2e.ran, "end-to-end artifacts unavailable");
  if (!g_e2e.ran) {
    return v;
  }
  const Json manifest =
      Json::parse(r2rec::read_text_file(g_e2e.manifest_path));
  const auto& files = manifest.at("files");
  v.require(files.contains("triplets") && files.contains("rollouts") &&
                files.contains("report"),
            "manifest does not cover all three artifact kinds");
  v.require(files.at("triplets").at("records").get<std::size_t>() ==
                g_e2e.triplet_records,
            "manifest triplet count mismatch");
  v.require(files.at("rollouts").at("records").get<std::size_t>() ==
                g_e2e.rollout_records,
            "manifest rollout count mismatch");
  v.require(files.at("rollouts").contains("template_version"),
            "manifest omits the rollout template version");
  v.require(manifest.at("seed").get<std::uint64_t>() == kSeed,
            "manifest seed mismatch");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "reward table conformance", 1.0, criterion_reward},
      {2, "grpo numerics", 30.0, criterion_grpo},
      {3, "toy grpo learning", 60.0, criterion_toy_learning},
      {4, "chain sampling oracle equivalence", 30.0, criterion_graph_oracle},
      {5, "metric identities", 5.0, criterion_metrics},
      {6, "evaluation protocol conformance", 10.0, criterion_protocol},
      {7, "masking soundness", 5.0, criterion_masking},
      {8, "end-to-end mock run", 120.0, criterion_end_to_end},
      {9, "export contract at desk scale", 30.0, criterion_export_contract},
  };

  bool all_ok = true;
  for (const auto& criterion : criteria) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = criterion.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("unexpected exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (elapsed >= criterion.budget_s) {
      v.ok = false;
      if (v.detail.empty()) {
        v.detail = "exceeded the " + std::to_string(criterion.budget_s) +
                   "s runtime budget";
      }
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (v.ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
         << criterion.name << " (" << elapsed << "s)";
    if (!v.ok) {
      line << " -- " << v.detail;
    }
    std::cout << line.str() << "\n";
    all_ok = all_ok && v.ok;
  }
  // Published full-scale results (hit@1 0.404 / 0.586 / 0.460) require
  // supervised fine-tuning plus RL of an 8B model and are out of scope for
  // this harness; the exported triplet and rollout datasets above are the
  // contract toward that run.
  std::cout << (all_ok ? "acceptance: all criteria passed"
                       : "acceptance: FAILURES above")
            << "\n";
  return all_ok ? 0 : 1;
}
