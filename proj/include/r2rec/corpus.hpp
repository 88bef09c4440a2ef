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
#ifndef R2REC_CORPUS_HPP_
#define R2REC_CORPUS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace r2rec::corpus {

struct RatingRecord {
  std::string user_id;
  std::string item_id;
  int rating = 0;  // integer scale 1..5
  std::int64_t timestamp = 0;
};

struct UserProfile {
  std::string user_id;
  // Attribute name -> value, e.g. {"gender","female"},{"age","25-34"}.
  // Empty for domains without demographics.
  std::map<std::string, std::string> demographics;
};

struct ItemMeta {
  std::string item_id;
  std::string title;  // never empty; "unknown" when metadata was missing
  std::map<std::string, std::string> attributes;
};

struct RatingCorpus {
  std::vector<RatingRecord> records;
  std::map<std::string, UserProfile> profiles;
  std::map<std::string, ItemMeta> items;
  // Ingest bookkeeping, carried so callers can surface data-quality notes.
  std::int64_t missing_meta_count = 0;
  std::int64_t duplicate_dropped = 0;
};

/// Chronological split for one user: everything but the most recent
/// positively rated record, which becomes the ground truth.
struct SplitEntry {
  std::vector<RatingRecord> history;  // ascending (timestamp, item_id)
  RatingRecord ground_truth;
};

struct HistoryEntry {
  std::string item_id;
  int rating = 0;
  std::int64_t timestamp = 0;
};

struct EvalInstance {
  std::string user_id;
  std::vector<HistoryEntry> history;  // chronologically ascending
  std::string ground_truth_item;
  std::vector<std::string> candidates;    // exactly 20, shuffled
  std::vector<std::string> recent_liked;  // up to 5, most recent first
};

/// MovieLens-1M "::"-separated files (ISO-8859-1; transcoded to UTF-8).
/// Demographic codes are expanded to readable bands and occupation names.
/// Throws DataError with file and line number on malformed lines, ratings
/// outside 1..5, or ratings referencing unknown users/movies.
RatingCorpus parse_movielens(const std::string& ratings_path,
                             const std::string& users_path,
                             const std::string& movies_path);

/// Line-delimited Amazon review and metadata records. Accepts the common
/// field spellings (reviewerID/user_id, asin/parent_asin, overall/rating,
/// unixReviewTime/timestamp). Ratings must be integral; timestamps are kept
/// verbatim. Items without metadata get title "unknown" and increment
/// missing_meta_count. Throws DataError with line number on malformed or
/// non-integer-rating records.
RatingCorpus parse_amazon(const std::string& reviews_path,
                          const std::string& meta_path);

/// Keeps exactly the users with at least min_positive ratings strictly above
/// positive_threshold, drops all records of removed users, and prunes items
/// left with no records. Idempotent.
RatingCorpus filter_users(const RatingCorpus& corpus, int min_positive = 6,
                          int positive_threshold = 3);

/// Per user: sort records ascending by (timestamp, item_id); the last record
/// rated > 3 is the ground truth, the rest are history. Users without a
/// positive record are skipped (cannot occur after filter_users).
std::map<std::string, SplitEntry> split_leave_last_positive(
    const RatingCorpus& corpus);

/// Builds the 20-item candidate set for one user: n_negatives items drawn
/// uniformly without replacement from items the user never interacted with,
/// shuffled together with the ground truth under the given seed. Callers
/// derive the seed per user from the global seed so instances can be built
/// concurrently yet deterministically. Throws DataError
/// ("candidate pool exhausted") when too few eligible items exist.
EvalInstance sample_candidates(const RatingCorpus& corpus,
                               const std::string& user_id,
                               const SplitEntry& split, int n_negatives,
                               std::uint64_t seed);

/// Seeded uniform sample of n users (all users when fewer exist), returned
/// in ascending user-id order.
std::vector<std::string> select_eval_users(const RatingCorpus& corpus, int n,
                                           std::uint64_t seed);

}  // namespace r2rec::corpus

#endif  // R2REC_CORPUS_HPP_
