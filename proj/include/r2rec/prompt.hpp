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
#ifndef R2REC_PROMPT_HPP_
#define R2REC_PROMPT_HPP_

#include <map>
#include <string>
#include <vector>

#include "r2rec/corpus.hpp"
#include "r2rec/graph.hpp"

namespace r2rec::prompt {

/// Wording family. kMovie keeps the movie-domain phrasing; kItem swaps the
/// noun for catalog domains without changing the structure.
enum class Domain { kMovie, kItem };

/// Accepts "movie" or "item"; throws ConfigError otherwise.
Domain domain_from_string(const std::string& s);

/// A chain with its final hop masked: the question asks for the rating u0
/// gives i1, and answer holds the true r_u0_i1. The question never depends
/// on the answer value.
struct IotQuery {
  graph::InteractionChain chain;
  std::string question;
  int answer = 0;
};

struct PromptText {
  std::string system;
  std::string user;
  std::map<std::string, std::string> meta;  // template id/version, entity ids

  /// System and user text joined, for whole-prompt assertions.
  std::string full() const { return system + "\n\n" + user; }
};

/// Prompt templates with {field} placeholders. Values substitute in a
/// single pass; substituted values are never re-scanned, so braces inside
/// titles are inert. Override by pointing load() at a directory holding
/// system.txt / iot.txt / iot_question.txt / rank.txt (missing files keep
/// their builtin text).
struct TemplateSet {
  std::string system;
  std::string iot;
  std::string iot_question;
  std::string rank;
  std::string version;

  static TemplateSet builtin();
  static TemplateSet load(const std::string& dir);
};

struct RenderOptions {
  Domain domain = Domain::kMovie;
  // 0 = unlimited. When the ranking prompt exceeds the budget, chains are
  // dropped from the end until it fits; an over-budget zero-chain prompt
  // throws.
  std::size_t char_budget = 0;
  TemplateSet templates = TemplateSet::builtin();
};

/// Renders a chain in arrow notation. Closed chains end back at the target
/// user with the final rating; unclosed chains stop at the final item so
/// the (u0, i1) rating never appears. Throws DataError naming any entity
/// with missing metadata.
std::string render_chain(const graph::InteractionChain& chain,
                         const std::map<std::string, corpus::ItemMeta>& items,
                         const std::map<std::string, corpus::UserProfile>& profiles,
                         bool closed, Domain domain);

/// Masks the final hop of a chain into a question/answer pair.
IotQuery forward_unclosed(const graph::InteractionChain& chain,
                          const std::map<std::string, corpus::ItemMeta>& items,
                          Domain domain);

/// The full masked/progressive generation prompt: rating legend, the four
/// progressive-masking requirement rules, the unclosed chain, the question,
/// and the answer line "Rating {answer}". The answer value appears only on
/// that line.
PromptText render_iot_prompt(
    const IotQuery& query,
    const std::map<std::string, corpus::ItemMeta>& items,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const RenderOptions& opts);

/// The inference form of the same query: chain and question without the
/// answer or the masking rules. This is the question side of exported
/// fine-tuning records.
PromptText render_iot_question(
    const IotQuery& query,
    const std::map<std::string, corpus::ItemMeta>& items,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const RenderOptions& opts);

/// The ranking prompt: demographics (omitted when absent), up to five
/// recently liked titles, the rendered chains (or a no-chains notice), the
/// 20 candidates labeled C1..C20, and the output contract asking for
/// numbered reasoning plus a final "Ranking:" line. Throws DataError unless
/// exactly 20 candidates are given.
PromptText render_rank_prompt(
    const corpus::EvalInstance& instance,
    const std::vector<graph::InteractionChain>& chains,
    const std::map<std::string, corpus::UserProfile>& profiles,
    const std::map<std::string, corpus::ItemMeta>& items,
    const RenderOptions& opts);

/// Candidate labels "C1".."Cn" in candidate order.
std::vector<std::string> candidate_labels(std::size_t n);

/// Stable 16-hex-digit fingerprint over the prompt's meta (template id and
/// version plus entity ids), used to key scripted mock responses. Prompts
/// without meta hash their text instead.
std::string prompt_fingerprint(const PromptText& prompt);

}  // namespace r2rec::prompt

#endif  // R2REC_PROMPT_HPP_
