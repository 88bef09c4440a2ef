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
#include "r2rec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "r2rec/errors.hpp"
#include "r2rec/jsonl.hpp"
#include "r2rec/rng.hpp"

namespace r2rec::corpus {

namespace {

/// MovieLens-1M ships ISO-8859-1 text; JSON output requires UTF-8.
std::string latin1_to_utf8(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }
  return out;
}

std::vector<std::string> split_on(const std::string& line,
                                  const std::string& sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
  return fields;
}

[[noreturn]] void line_error(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
}

std::int64_t parse_int(const std::string& s, const std::string& path,
                       std::size_t line_no, const std::string& field) {
  try {
    std::size_t consumed = 0;
    const std::int64_t v = std::stoll(s, &consumed);
    if (consumed != s.size()) {
      line_error(path, line_no, "malformed " + field + " '" + s + "'");
    }
    return v;
  } catch (const std::invalid_argument&) {
    line_error(path, line_no, "malformed " + field + " '" + s + "'");
  } catch (const std::out_of_range&) {
    line_error(path, line_no, field + " out of range '" + s + "'");
  }
}

const std::map<int, std::string>& age_bands() {
  static const std::map<int, std::string> kBands = {
      {1, "Under 18"}, {18, "18-24"}, {25, "25-34"}, {35, "35-44"},
      {45, "45-49"},   {50, "50-55"}, {56, "56+"},
  };
  return kBands;
}

const std::map<int, std::string>& occupations() {
  static const std::map<int, std::string> kNames = {
      {0, "other"},
      {1, "academic/educator"},
      {2, "artist"},
      {3, "clerical/admin"},
      {4, "college/grad student"},
      {5, "customer service"},
      {6, "doctor/health care"},
      {7, "executive/managerial"},
      {8, "farmer"},
      {9, "homemaker"},
      {10, "K-12 student"},
      {11, "lawyer"},
      {12, "programmer"},
      {13, "retired"},
      {14, "sales/marketing"},
      {15, "scientist"},
      {16, "self-employed"},
      {17, "technician/engineer"},
      {18, "tradesman/craftsman"},
      {19, "unemployed"},
      {20, "writer"},
  };
  return kNames;
}

void for_each_line(const std::string& path,
                   const std::function<void(std::size_t, const std::string&)>&
                       fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    fn(line_no, line);
  }
}

/// Drops exact (user, item, timestamp) duplicates, keeping the first.
void dedup_records(RatingCorpus& corpus) {
  std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
  std::vector<RatingRecord> kept;
  kept.reserve(corpus.records.size());
  for (const auto& r : corpus.records) {
    if (seen.emplace(r.user_id, r.item_id, r.timestamp).second) {
      kept.push_back(r);
    } else {
      ++corpus.duplicate_dropped;
    }
  }
  corpus.records = std::move(kept);
}

}  // namespace

RatingCorpus parse_movielens(const std::string& ratings_path,
                             const std::string& users_path,
                             const std::string& movies_path) {
  RatingCorpus corpus;

  for_each_line(users_path, [&](std::size_t n, const std::string& line) {
    const auto f = split_on(line, "::");
    if (f.size() != 5) {
      line_error(users_path, n, "expected 5 fields, got " +
                                    std::to_string(f.size()));
    }
    UserProfile p;
    p.user_id = f[0];
    if (f[1] == "F") {
      p.demographics["gender"] = "female";
    } else if (f[1] == "M") {
      p.demographics["gender"] = "male";
    } else {
      line_error(users_path, n, "unknown gender code '" + f[1] + "'");
    }
    const int age = static_cast<int>(parse_int(f[2], users_path, n, "age"));
    const auto age_it = age_bands().find(age);
    if (age_it == age_bands().end()) {
      line_error(users_path, n, "unknown age code '" + f[2] + "'");
    }
    p.demographics["age"] = age_it->second;
    const int occ =
        static_cast<int>(parse_int(f[3], users_path, n, "occupation"));
    const auto occ_it = occupations().find(occ);
    if (occ_it == occupations().end()) {
      line_error(users_path, n, "unknown occupation code '" + f[3] + "'");
    }
    p.demographics["occupation"] = occ_it->second;
    if (!corpus.profiles.emplace(p.user_id, std::move(p)).second) {
      line_error(users_path, n, "duplicate user id '" + f[0] + "'");
    }
  });

  for_each_line(movies_path, [&](std::size_t n, const std::string& line) {
    const auto f = split_on(line, "::");
    if (f.size() != 3) {
      line_error(movies_path, n, "expected 3 fields, got " +
                                     std::to_string(f.size()));
    }
    ItemMeta m;
    m.item_id = f[0];
    m.title = latin1_to_utf8(f[1]);
    if (m.title.empty()) {
      line_error(movies_path, n, "empty title");
    }
    std::string genres;
    for (const std::string& g : split_on(f[2], "|")) {
      if (g.empty()) {
        continue;
      }
      if (!genres.empty()) {
        genres += ", ";
      }
      genres += g;
    }
    if (!genres.empty()) {
      m.attributes["genres"] = latin1_to_utf8(genres);
    }
    if (!corpus.items.emplace(m.item_id, std::move(m)).second) {
      line_error(movies_path, n, "duplicate movie id '" + f[0] + "'");
    }
  });

  for_each_line(ratings_path, [&](std::size_t n, const std::string& line) {
    const auto f = split_on(line, "::");
    if (f.size() != 4) {
      line_error(ratings_path, n, "expected 4 fields, got " +
                                      std::to_string(f.size()));
    }
    RatingRecord r;
    r.user_id = f[0];
    r.item_id = f[1];
    const std::int64_t rating =
        parse_int(f[2], ratings_path, n, "rating");
    if (rating < 1 || rating > 5) {
      line_error(ratings_path, n, "rating out of range '" + f[2] + "'");
    }
    r.rating = static_cast<int>(rating);
    r.timestamp = parse_int(f[3], ratings_path, n, "timestamp");
    if (corpus.profiles.find(r.user_id) == corpus.profiles.end()) {
      line_error(ratings_path, n, "unknown user id '" + r.user_id + "'");
    }
    if (corpus.items.find(r.item_id) == corpus.items.end()) {
      line_error(ratings_path, n, "unknown movie id '" + r.item_id + "'");
    }
    corpus.records.push_back(std::move(r));
  });

  dedup_records(corpus);
  return corpus;
}

namespace {

std::string amazon_string(const Json& rec, const char* a, const char* b) {
  for (const char* key : {a, b}) {
    const auto it = rec.find(key);
    if (it != rec.end() && it->is_string() && !it->get<std::string>().empty()) {
      return it->get<std::string>();
    }
  }
  return "";
}

}  // namespace

RatingCorpus parse_amazon(const std::string& reviews_path,
                          const std::string& meta_path) {
  RatingCorpus corpus;

  if (!meta_path.empty()) {
    for_each_jsonl(meta_path, [&](std::size_t n, const Json& rec) {
      const std::string item = amazon_string(rec, "asin", "parent_asin");
      if (item.empty()) {
        line_error(meta_path, n, "metadata record without asin");
      }
      ItemMeta m;
      m.item_id = item;
      m.title = amazon_string(rec, "title", "title");
      if (m.title.empty()) {
        m.title = "unknown";
        ++corpus.missing_meta_count;
      }
      const std::string brand = amazon_string(rec, "brand", "brand");
      if (!brand.empty()) {
        m.attributes["brand"] = brand;
      }
      const std::string cat = amazon_string(rec, "main_cat", "category");
      if (!cat.empty()) {
        m.attributes["category"] = cat;
      }
      corpus.items[item] = std::move(m);  // later records win
    });
  }

  for_each_jsonl(reviews_path, [&](std::size_t n, const Json& rec) {
    RatingRecord r;
    r.user_id = amazon_string(rec, "reviewerID", "user_id");
    r.item_id = amazon_string(rec, "asin", "parent_asin");
    if (r.user_id.empty() || r.item_id.empty()) {
      line_error(reviews_path, n, "review record missing user or item id");
    }
    const Json* rating = nullptr;
    for (const char* key : {"overall", "rating"}) {
      const auto it = rec.find(key);
      if (it != rec.end()) {
        rating = &*it;
        break;
      }
    }
    if (rating == nullptr || !rating->is_number()) {
      line_error(reviews_path, n, "review record missing rating");
    }
    const double v = rating->get<double>();
    if (v != std::floor(v)) {
      line_error(reviews_path, n, "non-integer rating");
    }
    if (v < 1.0 || v > 5.0) {
      line_error(reviews_path, n, "rating out of range");
    }
    r.rating = static_cast<int>(v);
    const Json* ts = nullptr;
    for (const char* key : {"unixReviewTime", "timestamp"}) {
      const auto it = rec.find(key);
      if (it != rec.end()) {
        ts = &*it;
        break;
      }
    }
    if (ts == nullptr || !ts->is_number_integer()) {
      line_error(reviews_path, n, "review record missing timestamp");
    }
    r.timestamp = ts->get<std::int64_t>();

    corpus.profiles.emplace(r.user_id, UserProfile{r.user_id, {}});
    if (corpus.items.find(r.item_id) == corpus.items.end()) {
      corpus.items[r.item_id] = ItemMeta{r.item_id, "unknown", {}};
      ++corpus.missing_meta_count;
    }
    corpus.records.push_back(std::move(r));
  });

  // Metadata-only items never rated are irrelevant downstream; keep them,
  // they only widen the negative pool the way the raw dump would.
  dedup_records(corpus);
  return corpus;
}

RatingCorpus filter_users(const RatingCorpus& corpus, int min_positive,
                          int positive_threshold) {
  std::unordered_map<std::string, int> positives;
  for (const auto& r : corpus.records) {
    if (r.rating > positive_threshold) {
      ++positives[r.user_id];
    }
  }
  RatingCorpus out;
  out.missing_meta_count = corpus.missing_meta_count;
  out.duplicate_dropped = corpus.duplicate_dropped;
  std::unordered_set<std::string> live_items;
  for (const auto& r : corpus.records) {
    const auto it = positives.find(r.user_id);
    if (it == positives.end() || it->second < min_positive) {
      continue;
    }
    out.records.push_back(r);
    live_items.insert(r.item_id);
  }
  for (const auto& r : out.records) {
    const auto p = corpus.profiles.find(r.user_id);
    if (p != corpus.profiles.end()) {
      out.profiles.emplace(p->first, p->second);
    }
  }
  for (const auto& [item, meta] : corpus.items) {
    if (live_items.count(item) != 0) {
      out.items.emplace(item, meta);
    }
  }
  return out;
}

std::map<std::string, SplitEntry> split_leave_last_positive(
    const RatingCorpus& corpus) {
  std::map<std::string, std::vector<RatingRecord>> by_user;
  for (const auto& r : corpus.records) {
    by_user[r.user_id].push_back(r);
  }
  std::map<std::string, SplitEntry> out;
  for (auto& [user, records] : by_user) {
    std::sort(records.begin(), records.end(),
              [](const RatingRecord& a, const RatingRecord& b) {
                return std::tie(a.timestamp, a.item_id) <
                       std::tie(b.timestamp, b.item_id);
              });
    int gt_index = -1;
    for (int i = static_cast<int>(records.size()) - 1; i >= 0; --i) {
      if (records[i].rating > 3) {
        gt_index = i;
        break;
      }
    }
    if (gt_index < 0) {
      continue;  // no positive record; caller warned via count difference
    }
    SplitEntry entry;
    entry.ground_truth = records[gt_index];
    for (int i = 0; i < static_cast<int>(records.size()); ++i) {
      if (i != gt_index) {
        entry.history.push_back(records[i]);
      }
    }
    out.emplace(user, std::move(entry));
  }
  return out;
}

EvalInstance sample_candidates(const RatingCorpus& corpus,
                               const std::string& user_id,
                               const SplitEntry& split, int n_negatives,
                               std::uint64_t seed) {
  if (n_negatives < 0) {
    throw std::invalid_argument("sample_candidates: negative n_negatives");
  }
  std::unordered_set<std::string> interacted;
  for (const auto& r : corpus.records) {
    if (r.user_id == user_id) {
      interacted.insert(r.item_id);
    }
  }
  std::vector<std::string> eligible;
  eligible.reserve(corpus.items.size());
  for (const auto& [item, meta] : corpus.items) {  // sorted map: stable order
    if (interacted.count(item) == 0) {
      eligible.push_back(item);
    }
  }
  if (static_cast<int>(eligible.size()) < n_negatives) {
    throw DataError("candidate pool exhausted for user " + user_id);
  }

  Rng rng(seed);
  EvalInstance inst;
  inst.user_id = user_id;
  inst.ground_truth_item = split.ground_truth.item_id;
  inst.candidates.push_back(inst.ground_truth_item);
  for (std::size_t idx :
       rng.sample_indices(eligible.size(), static_cast<std::size_t>(n_negatives))) {
    inst.candidates.push_back(eligible[idx]);
  }
  rng.shuffle(inst.candidates);

  for (const auto& r : split.history) {
    inst.history.push_back({r.item_id, r.rating, r.timestamp});
  }
  for (auto it = split.history.rbegin();
       it != split.history.rend() && inst.recent_liked.size() < 5; ++it) {
    if (it->rating > 3) {
      inst.recent_liked.push_back(it->item_id);
    }
  }
  return inst;
}

std::vector<std::string> select_eval_users(const RatingCorpus& corpus, int n,
                                           std::uint64_t seed) {
  if (n < 0) {
    throw std::invalid_argument("select_eval_users: negative n");
  }
  std::vector<std::string> users;
  users.reserve(corpus.profiles.size());
  for (const auto& [user, profile] : corpus.profiles) {
    users.push_back(user);  // map iteration: already ascending
  }
  if (static_cast<int>(users.size()) <= n) {
    return users;
  }
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t idx :
       rng.sample_indices(users.size(), static_cast<std::size_t>(n))) {
    out.push_back(users[idx]);
  }
  // The sample is drawn in shuffle order; the contract is ascending ids.
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace r2rec::corpus
