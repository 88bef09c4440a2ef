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
#ifndef R2REC_PARSE_HPP_
#define R2REC_PARSE_HPP_

#include <optional>
#include <string>
#include <vector>

namespace r2rec::parse {

/// Counted reasoning extracted from a free-text model response.
struct ReasoningTrace {
  std::vector<std::string> steps;
  int num_steps = 0;  // always |steps|
  std::string raw_span;  // the reasoning region the steps were read from
};

/// A recovered ordering of the candidate labels.
struct RankedList {
  std::vector<std::string> order;  // permutation of the candidate labels
  bool repaired = false;           // any repair or format fallback fired
  int gt_rank = 0;                 // 1-based position of the ground truth; 0 if not asked for
};

/// Counts reasoning steps in the text before the final-answer/ranking line.
/// Detection priority: explicit "Step k" markers, then numbered-list lines
/// ("1.", "2)"), then sentence segmentation. Never throws; empty or
/// unmarked text yields zero steps.
ReasoningTrace extract_reasoning(const std::string& raw);

/// Final rating 1..5: the last "Rating <d>" or standalone digit after the
/// last "Final answer" marker (case-insensitive). Without the marker only an
/// explicit "Rating <d>" anywhere in the text is accepted. Throws ParseError
/// ("unparsable rating") when nothing matches.
int extract_rating(const std::string& raw);

/// Recovers a full permutation of `candidates` from the text after the last
/// "Ranking:" marker. Repair policy: duplicate labels keep their first
/// occurrence, unknown tokens are ignored, missing labels are appended in
/// original candidate order. Without the marker the whole text is scanned
/// and at least one label must appear. `repaired` is set when any repair or
/// the marker fallback fired. Labels must be single alphanumeric tokens.
///
/// When `gt_label` is given it must be one of the candidates; gt_rank is
/// filled with its 1-based position in the result.
///
/// Throws ParseError ("unparsable ranking") when no label can be recovered.
RankedList extract_ranking(const std::string& raw,
                           const std::vector<std::string>& candidates,
                           const std::optional<std::string>& gt_label =
                               std::nullopt);

}  // namespace r2rec::parse

#endif  // R2REC_PARSE_HPP_
