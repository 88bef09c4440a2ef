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
#include "r2rec/parse.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "r2rec/errors.hpp"

namespace r2rec::parse {

namespace {

std::string lower(const std::string& s) {
  std::string out(s.size(), '\0');
  std::transform(s.begin(), s.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

/// Position just past the reasoning region: the start of the last
/// final-answer or ranking marker, whichever opens the answer block.
std::size_t answer_boundary(const std::string& raw) {
  const std::string low = lower(raw);
  const std::size_t fa = low.rfind("final answer");
  const std::size_t rk = low.rfind("ranking:");
  if (fa == std::string::npos) {
    return rk;
  }
  if (rk == std::string::npos) {
    return fa;
  }
  return std::min(fa, rk);
}

/// Strips leading markdown bullets and emphasis so list detection sees the
/// payload ("- **1. foo**" -> "1. foo**").
std::string strip_bullet(const std::string& line) {
  std::string s = trim(line);
  while (!s.empty() && (s[0] == '-' || s[0] == '*' || s[0] == '+' ||
                        s[0] == '#' || s[0] == '>')) {
    s.erase(0, 1);
    s = trim(s);
  }
  return s;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(s.substr(start));
      break;
    }
    lines.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

/// Maximal alphanumeric tokens in order of appearance.
std::vector<std::string> word_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_word_char(static_cast<unsigned char>(s[i]))) {
      std::size_t j = i;
      while (j < s.size() && is_word_char(static_cast<unsigned char>(s[j]))) {
        ++j;
      }
      tokens.push_back(s.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
  return tokens;
}

}  // namespace

ReasoningTrace extract_reasoning(const std::string& raw) {
  ReasoningTrace trace;
  const std::size_t boundary = answer_boundary(raw);
  trace.raw_span =
      boundary == std::string::npos ? raw : raw.substr(0, boundary);
  const std::string& span = trace.raw_span;

  // Priority 1: explicit "Step k" markers.
  static const std::regex kStep(R"(\bstep\s*(\d+))", std::regex::icase);
  std::vector<std::size_t> marker_pos;
  for (auto it = std::sregex_iterator(span.begin(), span.end(), kStep);
       it != std::sregex_iterator(); ++it) {
    marker_pos.push_back(static_cast<std::size_t>(it->position()));
  }
  if (!marker_pos.empty()) {
    for (std::size_t i = 0; i < marker_pos.size(); ++i) {
      const std::size_t begin = marker_pos[i];
      const std::size_t end =
          i + 1 < marker_pos.size() ? marker_pos[i + 1] : span.size();
      trace.steps.push_back(trim(span.substr(begin, end - begin)));
    }
    trace.num_steps = static_cast<int>(trace.steps.size());
    return trace;
  }

  // Priority 2: numbered-list lines.
  static const std::regex kNumbered(R"(^\d+[.)]\s+\S)");
  for (const std::string& line : split_lines(span)) {
    const std::string normalized = strip_bullet(line);
    if (std::regex_search(normalized, kNumbered)) {
      trace.steps.push_back(normalized);
    }
  }
  if (!trace.steps.empty()) {
    trace.num_steps = static_cast<int>(trace.steps.size());
    return trace;
  }

  // Priority 3: sentence segmentation.
  std::string current;
  for (std::size_t i = 0; i < span.size(); ++i) {
    current += span[i];
    const char c = span[i];
    if (c == '.' || c == '!' || c == '?') {
      const bool at_end = i + 1 >= span.size();
      const bool followed_by_space =
          !at_end && std::isspace(static_cast<unsigned char>(span[i + 1]));
      if (at_end || followed_by_space) {
        const std::string sentence = trim(current);
        if (!sentence.empty()) {
          trace.steps.push_back(sentence);
        }
        current.clear();
      }
    }
  }
  const std::string tail = trim(current);
  if (!tail.empty()) {
    trace.steps.push_back(tail);
  }
  trace.num_steps = static_cast<int>(trace.steps.size());
  return trace;
}

namespace {

/// Last standalone digit 1..5 in span, optionally requiring a preceding
/// "rating" keyword. Returns 0 when absent.
int last_rating_digit(const std::string& span, bool require_keyword) {
  const std::string low = lower(span);
  int found = 0;
  for (std::size_t i = 0; i < low.size(); ++i) {
    const char c = low[i];
    if (c < '1' || c > '5') {
      continue;
    }
    const bool left_ok =
        i == 0 || !is_word_char(static_cast<unsigned char>(low[i - 1]));
    const bool right_ok =
        i + 1 >= low.size() ||
        !is_word_char(static_cast<unsigned char>(low[i + 1]));
    if (!left_ok || !right_ok) {
      continue;
    }
    if (require_keyword) {
      // Accept "rating 4", "rating: 4", "rating=4" and similar.
      const std::size_t kw = low.rfind("rating", i);
      if (kw == std::string::npos) {
        continue;
      }
      const std::string between = low.substr(kw + 6, i - (kw + 6));
      if (between.find_first_not_of(" \t:=-*") != std::string::npos) {
        continue;
      }
    }
    found = c - '0';
  }
  return found;
}

}  // namespace

int extract_rating(const std::string& raw) {
  const std::string low = lower(raw);
  const std::size_t marker = low.rfind("final answer");
  if (marker != std::string::npos) {
    const int d = last_rating_digit(raw.substr(marker), false);
    if (d != 0) {
      return d;
    }
  }
  const int d = last_rating_digit(raw, true);
  if (d != 0) {
    return d;
  }
  throw ParseError("unparsable rating");
}

RankedList extract_ranking(const std::string& raw,
                           const std::vector<std::string>& candidates,
                           const std::optional<std::string>& gt_label) {
  if (candidates.empty()) {
    throw std::invalid_argument("extract_ranking: no candidates");
  }
  std::unordered_map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!label_index.emplace(candidates[i], i).second) {
      throw std::invalid_argument("extract_ranking: duplicate candidate label");
    }
  }

  const std::string low = lower(raw);
  const std::size_t marker = low.rfind("ranking:");
  const bool have_marker = marker != std::string::npos;
  const std::string span =
      have_marker ? raw.substr(marker + std::string("ranking:").size()) : raw;

  RankedList out;
  std::unordered_set<std::string> seen;
  for (const std::string& token : word_tokens(span)) {
    if (label_index.count(token) == 0) {
      continue;
    }
    if (!seen.insert(token).second) {
      out.repaired = true;  // duplicate dropped
      continue;
    }
    out.order.push_back(token);
  }
  if (!have_marker) {
    if (out.order.empty()) {
      throw ParseError("unparsable ranking");
    }
    out.repaired = true;  // recovered without the expected marker
  }
  if (out.order.size() < candidates.size()) {
    out.repaired = true;
    for (const std::string& label : candidates) {
      if (seen.insert(label).second) {
        out.order.push_back(label);
      }
    }
  }

  if (gt_label) {
    const auto it = std::find(out.order.begin(), out.order.end(), *gt_label);
    if (it == out.order.end()) {
      throw std::invalid_argument(
          "extract_ranking: ground truth not among candidates");
    }
    out.gt_rank = static_cast<int>(it - out.order.begin()) + 1;
  }
  return out;
}

}  // namespace r2rec::parse
