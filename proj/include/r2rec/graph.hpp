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
#ifndef R2REC_GRAPH_HPP_
#define R2REC_GRAPH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "r2rec/corpus.hpp"
#include "r2rec/rng.hpp"

namespace r2rec::graph {

/// Bipartite user-item adjacency with rating labels. The two maps are exact
/// transposes; a (user, item) pair appears at most once.
struct InteractionGraph {
  std::map<std::string, std::map<std::string, int>> user_adj;
  std::map<std::string, std::map<std::string, int>> item_adj;
};

/// Closed 4-hop path u0 -> i0 -> u1 -> i1 -> u0. Both items are shared
/// interactions of the two users, so all four edges exist.
struct InteractionChain {
  std::string u0;
  std::string i0;
  std::string u1;
  std::string i1;
  int r_u0_i0 = 0;
  int r_u1_i0 = 0;
  int r_u1_i1 = 0;
  int r_u0_i1 = 0;
};

/// Builds the adjacency from a corpus. Duplicate (user, item) interactions
/// collapse to the latest-timestamp rating. Edges listed in `excluded`
/// (user -> item) are left out; evaluation passes each user's ground-truth
/// edge here so chains cannot leak the answer.
InteractionGraph build_graph(
    const corpus::RatingCorpus& corpus,
    const std::map<std::string, std::string>& excluded = {});

/// All users other than u0 sharing at least two interacted items with u0,
/// ascending. Computed by co-rater counting, which equals the union of
/// pairwise item-audience intersections over u0's item pairs. Throws
/// DataError ("unknown user") when u0 is absent.
std::vector<std::string> candidate_users(const InteractionGraph& graph,
                                         const std::string& u0);

/// Draws one chain: u1 uniform over candidate_users, then an unordered item
/// pair uniform over the shared items, hop order randomized. Throws
/// DataError ("no chain available") when no candidate exists.
InteractionChain sample_chain(const InteractionGraph& graph,
                              const std::string& u0, Rng& rng);

/// Up to k chains for u0, distinct under (u1, unordered {i0, i1}). Returns
/// fewer when the neighborhood cannot supply k distinct chains and an empty
/// list when none exists. Rejection sampling with a bounded attempt budget,
/// then a deterministic sweep of the remaining pairs, keeps this total.
std::vector<InteractionChain> sample_chains(const InteractionGraph& graph,
                                            const std::string& u0, int k,
                                            Rng& rng);

}  // namespace r2rec::graph

#endif  // R2REC_GRAPH_HPP_
