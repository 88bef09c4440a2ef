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
#include "r2rec/prompt.hpp"

#include <cstdio>
#include <filesystem>

#include "r2rec/errors.hpp"
#include "r2rec/jsonl.hpp"
#include "r2rec/rng.hpp"

namespace r2rec::prompt {

namespace {

constexpr char kSystemTemplate[] =
    "You are a {noun} recommendation expert.";

constexpr char kIotTemplate[] =
    R"(I will give you a user-{noun} interaction chain, a question and a correct answer. The interaction chain contains the user's rating of a certain {noun} and the basic information of the user/{noun}. {Noun} ratings are integers from 1 to 5, with 5 standing for very liked, 4 standing for liked, 3 standing for neutral, 2 standing for disliked and 1 standing for very disliked. The following is the form of the interaction chain that shows the common {activity} behavior and ratings among users, and the basic information of the user/{noun} is also recorded in this interaction chain:
(Target user)(Basic information of Target user) -- (Rating 5) -- ({Noun} A)(Basic information of {Noun} A) -- (Rating 4) -- (User 1234)(Basic information of User 1234) -- (Rating 2) -- ({Noun} B)(Basic information of {Noun} B) -- (Rating 3) -- (Target user)
The meaning of the above interaction chain is:
The target user has {consumed} the {Noun} A and gave it a score of 5, while user 1234 has also {consumed} {Noun} A and gave it a score of 4, and user 1234 has also {consumed} the {Noun} B and gave it a score of 2. This target user has {consumed} the {Noun} B as well and gives it a score of 3.
Your task is to pretend to reason step by step about this interaction chain without knowing the given answer in advance, independently analyze the information of each jump in the interaction chain, and gradually obtain the final answer. The reasoning process must comply with the following requirements:
1. Your reasoning process should be progressive, and the next step of reasoning should only rely on the previous reasoning results.
2. Your reasoning process should be masked. When reasoning about the information of a certain hop in the interaction chain, the only information you can utilize is the information before that hop, and you cannot utilize the information after that hop.
3. Your reasoning process should not contain any information about the final answer. The answers provided are only to guide your reasoning process.
4. The answer obtained based on your reasoning process should be consistent with the correct one.

Next, I will provide you with a user-{noun} interaction chain, a question and a correct answer:

Interaction chain:
{chain}

Question:
{question}

Answer:
Rating {answer}

Please output your reasoning process and the final answer obtained based on the reasoning process:

Reasoning process:

Final answer:)";

constexpr char kIotQuestionTemplate[] =
    R"(I will give you a user-{noun} interaction chain and a question. The interaction chain contains the user's rating of a certain {noun} and the basic information of the user/{noun}. {Noun} ratings are integers from 1 to 5, with 5 standing for very liked, 4 standing for liked, 3 standing for neutral, 2 standing for disliked and 1 standing for very disliked. The interaction chain shows the common {activity} behavior and ratings among users.

Interaction chain:
{chain}

Question:
{question}

Please reason step by step about this interaction chain. Analyze the information of each jump progressively, then output the final answer as a line "Rating <n>".

Reasoning process:

Final answer:)";

constexpr char kRankTemplate[] =
    R"({Noun} ratings are integers from 1 to 5, with 5 standing for very liked, 4 standing for liked, 3 standing for neutral, 2 standing for disliked and 1 standing for very disliked.

{profile_block}{liked_block}{chains_block}Candidate {noun}s:
{candidates}

Your task is to rank all {n_candidates} candidate {noun}s for the target user in descending order of preference. First output your reasoning process as a numbered list of steps (1., 2., ...). Then output exactly one final line that starts with "Ranking:" followed by all {n_candidates} candidate labels in descending preference order, separated by spaces.)";

struct Wording {
  std::string noun;
  std::string cap_noun;
  std::string consumed;
  std::string activity;
};

Wording wording_for(Domain domain) {
  if (domain == Domain::kMovie) {
    return {"movie", "Movie", "watched", "viewing"};
  }
  return {"item", "Item", "interacted with", "interaction"};
}

/// Single-pass placeholder substitution; values are appended verbatim and
/// never re-scanned.
std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string::npos) {
        const std::string key = tmpl.substr(i + 1, close - i - 1);
        const auto it = values.find(key);
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i];
    ++i;
  }
  return out;
}

std::map<std::string, std::string> domain_values(Domain domain) {
  const Wording w = wording_for(domain);
  return {{"noun", w.noun},
          {"Noun", w.cap_noun},
          {"consumed", w.consumed},
          {"activity", w.activity}};
}

std::string join_attrs(const std::map<std::string, std::string>& attrs) {
  std::string out;
  for (const auto& [key, value] : attrs) {
    if (!out.empty()) {
      out += ", ";
    }
    out += key + ": " + value;
  }
  return out;
}

const corpus::ItemMeta& item_or_throw(
    const std::map<std::string, corpus::ItemMeta>& items,
    const std::string& id) {
  const auto it = items.find(id);
  if (it == items.end()) {
    throw DataError("missing item metadata: " + id);
  }
  return it->second;
}

const corpus::UserProfile& profile_or_throw(
    const std::map<std::string, corpus::UserProfile>& profiles,
    const std::string& id) {
  const auto it = profiles.find(id);
  if (it == profiles.end()) {
    throw DataError("missing user profile: " + id);
  }
  return it->second;
}

std::string user_node(const std::string& shown,
                      const corpus::UserProfile& profile) {
  std::string out = "(" + shown + ")";
  const std::string info = join_attrs(profile.demographics);
  if (!info.empty()) {
    out += "(" + info + ")";
  }
  return out;
}

std::string item_node(const corpus::ItemMeta& meta, const Wording& w) {
  std::string out = "(" + w.cap_noun + " " + meta.title + ")";
  const std::string info = join_attrs(meta.attributes);
  if (!info.empty()) {
    out += "(" + info + ")";
  }
  return out;
}

std::string rating_hop(int rating) {
  return " -- (Rating " + std::to_string(rating) + ") -- ";
}

}  // namespace

Domain domain_from_string(const std::string& s) {
  if (s == "movie") {
    return Domain::kMovie;
  }
  if (s == "item") {
    return Domain::kItem;
  }
  throw ConfigError("unknown domain '" + s + "' (expected movie or item)");
}

std::string render_chain(
    const graph::InteractionChain& chain,
    const std::map<std::string, corpus::ItemMeta>& items,
    const std::map<std::string, corpus::UserProfile>& profiles, bool closed,
    Domain domain) {
  const Wording w = wording_for(domain);
  std::string out = user_node("Target user", profile_or_throw(profiles, chain.u0));
  out += rating_hop(chain.r_u0_i0);
  out += item_node(item_or_throw(items, chain.i0), w);
  out += rating_hop(chain.r_u1_i0);
  out += user_node("User " + chain.u1, profile_or_throw(profiles, chain.u1));
  out += rating_hop(chain.r_u1_i1);
  out += item_node(item_or_throw(items, chain.i1), w);
  if (closed) {
    out += rating_hop(chain.r_u0_i1);
    out += "(Target user)";
  }
  return out;
}

IotQuery forward_unclosed(const graph::InteractionChain& chain,
                          const std::map<std::string, corpus::ItemMeta>& items,
                          Domain domain) {
  const Wording w = wording_for(domain);
  IotQuery q;
  q.chain = chain;
  q.answer = chain.r_u0_i1;
  q.question = "What is the rating of the " + w.noun + " " +
               item_or_throw(items, chain.i1).title +
               " given by the target user?";
  return q;
}

TemplateSet TemplateSet::builtin() {
  TemplateSet t;
  t.system = kSystemTemplate;
  t.iot = kIotTemplate;
  t.iot_question = kIotQuestionTemplate;
  t.rank = kRankTemplate;
  t.version = "1";
  return t;
}

TemplateSet TemplateSet::load(const std::string& dir) {
  TemplateSet t = builtin();
  const auto load_if_present = [&dir](const char* name, std::string* slot) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    if (std::filesystem::exists(path)) {
      *slot = read_text_file(path.string());
    }
  };
  load_if_present("system.txt", &t.system);
  load_if_present("iot.txt", &t.iot);
  load_if_present("iot_question.txt", &t.iot_question);
  load_if_present("rank.txt", &t.rank);
  t.version = "custom:" + dir;
  return t;
}

namespace {

std::map<std::string, std::string> chain_meta(const IotQuery& query) {
  return {{"u0", query.chain.u0},
          {"u1", query.chain.u1},
          {"i0", query.chain.i0},
          {"i1", query.chain.i1}};
}

PromptText render_iot_common(
    const IotQuery& query, const std::map<std::string, corpus::ItemMeta>& items,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const RenderOptions& opts, const std::string& tmpl,
    const std::string& template_id, bool with_answer) {
  std::map<std::string, std::string> values = domain_values(opts.domain);
  values["chain"] =
      render_chain(query.chain, items, profiles, /*closed=*/false, opts.domain);
  values["question"] = query.question;
  if (with_answer) {
    values["answer"] = std::to_string(query.answer);
  }
  PromptText out;
  out.system = substitute(opts.templates.system, values);
  out.user = substitute(tmpl, values);
  out.meta = chain_meta(query);
  out.meta["template_id"] = template_id;
  out.meta["template_version"] = opts.templates.version;
  return out;
}

}  // namespace

PromptText render_iot_prompt(
    const IotQuery& query, const std::map<std::string, corpus::ItemMeta>& items,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const RenderOptions& opts) {
  return render_iot_common(query, items, profiles, opts, opts.templates.iot,
                           "iot", /*with_answer=*/true);
}

PromptText render_iot_question(
    const IotQuery& query, const std::map<std::string, corpus::ItemMeta>& items,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const RenderOptions& opts) {
  return render_iot_common(query, items, profiles, opts,
                           opts.templates.iot_question, "iot-q",
                           /*with_answer=*/false);
}

std::vector<std::string> candidate_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    labels.push_back("C" + std::to_string(i));
  }
  return labels;
}

PromptText render_rank_prompt(
    const corpus::EvalInstance& instance,
    const std::vector<graph::InteractionChain>& chains,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const std::map<std::string, corpus::ItemMeta>& items,
    const RenderOptions& opts) {
  if (instance.candidates.size() != 20) {
    throw DataError("expected 20 candidates for user " + instance.user_id +
                    ", got " + std::to_string(instance.candidates.size()));
  }
  const Wording w = wording_for(opts.domain);

  std::string profile_block;
  const auto profile = profiles.find(instance.user_id);
  if (profile != profiles.end() && !profile->second.demographics.empty()) {
    profile_block = "Target user information:\n" +
                    join_attrs(profile->second.demographics) + "\n\n";
  }

  std::string liked_block;
  if (!instance.recent_liked.empty()) {
    liked_block = "The target user recently liked the following " + w.noun +
                  "s (most recent first):\n";
    for (const std::string& item : instance.recent_liked) {
      liked_block += "- " + item_or_throw(items, item).title + "\n";
    }
    liked_block += "\n";
  }

  std::string candidates;
  const std::vector<std::string> labels =
      candidate_labels(instance.candidates.size());
  for (std::size_t i = 0; i < instance.candidates.size(); ++i) {
    candidates += labels[i] + ". " +
                  item_or_throw(items, instance.candidates[i]).title;
    if (i + 1 < instance.candidates.size()) {
      candidates += "\n";
    }
  }

  std::map<std::string, std::string> values = domain_values(opts.domain);
  values["candidates"] = candidates;
  values["n_candidates"] = std::to_string(instance.candidates.size());
  values["profile_block"] = profile_block;
  values["liked_block"] = liked_block;

  // Chain-count reduction against the character budget: drop chains from
  // the end until the prompt fits.
  for (std::size_t use = chains.size();; --use) {
    std::string chains_block;
    if (use == 0) {
      chains_block = "No interaction chains available.\n\n";
    } else {
      chains_block = "The following interaction chains show the common " +
                     w.activity + " behavior and ratings among users, and "
                     "the basic information of the user/" + w.noun +
                     " is also recorded:\n";
      for (std::size_t c = 0; c < use; ++c) {
        chains_block += render_chain(chains[c], items, profiles,
                                     /*closed=*/true, opts.domain) + "\n";
      }
      chains_block += "\n";
    }
    values["chains_block"] = chains_block;

    PromptText out;
    out.system = substitute(opts.templates.system, values);
    out.user = substitute(opts.templates.rank, values);
    out.meta["template_id"] = "rank";
    out.meta["template_version"] = opts.templates.version;
    out.meta["user_id"] = instance.user_id;
    out.meta["chain_count"] = std::to_string(use);
    if (opts.char_budget == 0 ||
        out.system.size() + out.user.size() <= opts.char_budget) {
      return out;
    }
    if (use == 0) {
      throw DataError("prompt for user " + instance.user_id +
                      " exceeds the character budget even without chains");
    }
  }
}

std::string prompt_fingerprint(const PromptText& prompt) {
  // Meta holds the template id/version and entity ids, which identify a
  // prompt; meta-less hand-built prompts fall back to the text itself.
  std::string payload;
  if (prompt.meta.empty()) {
    payload = prompt.system + "\x1e" + prompt.user;
  } else {
    for (const auto& [key, value] : prompt.meta) {  // sorted map: stable
      payload += key + "=" + value + "\x1e";
    }
  }
  const std::uint64_t h = fnv1a64(payload);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace r2rec::prompt
