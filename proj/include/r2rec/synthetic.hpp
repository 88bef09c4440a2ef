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
#ifndef R2REC_SYNTHETIC_HPP_
#define R2REC_SYNTHETIC_HPP_

#include <cstdint>

#include "r2rec/corpus.hpp"

namespace r2rec::synthetic {

struct SyntheticConfig {
  int n_users = 200;
  int n_items = 500;
  int min_ratings = 8;
  int max_ratings = 30;
  // Fraction of users deliberately given fewer than six positive ratings so
  // the activity filter has something to drop.
  double low_positive_fraction = 0.15;
};

/// Deterministic synthetic rating corpus for offline tests. Ids, titles,
/// demographics, and genres are all digit-free, so any digit a rendered
/// prompt contains is a rating; masking checks rely on this. A popular item
/// band skews co-rating so most surviving users admit interaction chains.
corpus::RatingCorpus make_synthetic_corpus(const SyntheticConfig& cfg,
                                           std::uint64_t seed);

}  // namespace r2rec::synthetic

#endif  // R2REC_SYNTHETIC_HPP_
