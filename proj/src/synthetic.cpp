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
#include "r2rec/synthetic.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "r2rec/rng.hpp"

namespace r2rec::synthetic {

namespace {

const char* kAdjectives[] = {
    "crimson", "silent",  "amber",   "velvet",  "gilded",  "hollow",
    "wandering", "frozen", "verdant", "midnight", "scarlet", "ivory",
    "restless", "golden", "shattered", "quiet",  "burning", "distant",
    "savage",  "tender",  "brazen",  "pale",    "luminous", "weathered",
    "forgotten"};

const char* kNouns[] = {
    "harbor", "meadow", "lantern", "voyage",  "orchard", "citadel",
    "mirror", "tempest", "garden", "corridor", "ember",   "horizon",
    "pilgrim", "anthem", "saunter", "willow",  "compass", "veranda",
    "monolith", "quarry"};

const char* kGenres[] = {"drama",   "comedy",  "thriller", "romance",
                         "mystery", "fantasy", "western",  "noir"};

const char* kAges[] = {"young adult", "adult", "middle aged", "senior"};

const char* kOccupations[] = {"artist",    "teacher", "engineer", "farmer",
                              "librarian", "nurse",   "carpenter", "chef"};

/// Digit-free spelled index: zero-padded base-26 letters, e.g. 27 -> "bb"
/// at width 2.
std::string letters(int index, int width) {
  std::string out(width, 'a');
  for (int pos = width - 1; pos >= 0 && index > 0; --pos) {
    out[pos] = static_cast<char>('a' + index % 26);
    index /= 26;
  }
  return out;
}

std::string capitalize(std::string word) {
  if (!word.empty()) {
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
  }
  return word;
}

}  // namespace

corpus::RatingCorpus make_synthetic_corpus(const SyntheticConfig& cfg,
                                           std::uint64_t seed) {
  if (cfg.n_users < 1 || cfg.n_items < 2 || cfg.min_ratings < 1 ||
      cfg.max_ratings < cfg.min_ratings || cfg.n_items <= cfg.max_ratings) {
    throw std::invalid_argument("make_synthetic_corpus: bad dimensions");
  }
  constexpr int kNumAdjectives = std::size(kAdjectives);
  constexpr int kNumNouns = std::size(kNouns);
  if (cfg.n_items > kNumAdjectives * kNumNouns) {
    throw std::invalid_argument("make_synthetic_corpus: too many items");
  }

  Rng rng(derive_seed(seed, "synthetic"));
  corpus::RatingCorpus out;

  std::vector<std::string> item_ids(cfg.n_items);
  for (int i = 0; i < cfg.n_items; ++i) {
    corpus::ItemMeta meta;
    meta.item_id = "itm-" + letters(i, 3);
    meta.title = capitalize(kAdjectives[i % kNumAdjectives]) + " " +
                 std::string(kNouns[i / kNumAdjectives]);
    meta.attributes["genres"] =
        kGenres[rng.below(std::size(kGenres))];
    item_ids[i] = meta.item_id;
    out.items.emplace(meta.item_id, std::move(meta));
  }

  // A small popular band draws half of all interactions so users co-rate
  // enough items to admit chains.
  const int popular = std::max(2, cfg.n_items / 10);

  for (int u = 0; u < cfg.n_users; ++u) {
    corpus::UserProfile profile;
    profile.user_id = "u-" + letters(u, 3);
    profile.demographics["gender"] = rng.below(2) == 0 ? "female" : "male";
    profile.demographics["age"] = kAges[rng.below(std::size(kAges))];
    profile.demographics["occupation"] =
        kOccupations[rng.below(std::size(kOccupations))];
    const std::string user_id = profile.user_id;
    out.profiles.emplace(user_id, std::move(profile));

    const int n_ratings =
        cfg.min_ratings +
        static_cast<int>(rng.below(
            static_cast<std::uint64_t>(cfg.max_ratings - cfg.min_ratings + 1)));

    // Distinct items, biased toward the popular band.
    std::vector<int> chosen;
    std::unordered_set<int> used;
    std::uint64_t guard = 0;
    while (static_cast<int>(chosen.size()) < n_ratings &&
           guard < 40ull * static_cast<std::uint64_t>(n_ratings)) {
      ++guard;
      const int idx = rng.below(2) == 0
                          ? static_cast<int>(rng.below(popular))
                          : static_cast<int>(rng.below(cfg.n_items));
      if (used.insert(idx).second) {
        chosen.push_back(idx);
      }
    }
    for (int idx = 0; static_cast<int>(chosen.size()) < n_ratings; ++idx) {
      if (used.insert(idx).second) {
        chosen.push_back(idx);
      }
    }

    const bool low_positive =
        rng.real01() < cfg.low_positive_fraction;
    int forced_positives =
        low_positive ? static_cast<int>(rng.below(6)) : 7;
    forced_positives = std::min(forced_positives, n_ratings);

    for (int r = 0; r < n_ratings; ++r) {
      corpus::RatingRecord rec;
      rec.user_id = user_id;
      rec.item_id = item_ids[chosen[r]];
      if (r < forced_positives) {
        rec.rating = 4 + static_cast<int>(rng.below(2));
      } else if (low_positive) {
        rec.rating = 1 + static_cast<int>(rng.below(3));
      } else {
        rec.rating = 1 + static_cast<int>(rng.below(5));
      }
      // Coarse clock: ~1000 distinct hours, so same-timestamp ties occur
      // and exercise the (timestamp, item_id) ordering.
      rec.timestamp =
          1'000'000'000 + static_cast<std::int64_t>(rng.below(1000)) * 3600;
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace r2rec::synthetic
