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
#include "r2rec/graph.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

#include "r2rec/errors.hpp"

namespace r2rec::graph {

InteractionGraph build_graph(
    const corpus::RatingCorpus& corpus,
    const std::map<std::string, std::string>& excluded) {
  // Latest timestamp wins on duplicate (user, item) pairs.
  std::map<std::pair<std::string, std::string>, std::pair<std::int64_t, int>>
      latest;
  for (const auto& r : corpus.records) {
    const auto ex = excluded.find(r.user_id);
    if (ex != excluded.end() && ex->second == r.item_id) {
      continue;
    }
    auto& slot = latest[{r.user_id, r.item_id}];
    if (slot.second == 0 || r.timestamp >= slot.first) {
      slot = {r.timestamp, r.rating};
    }
  }
  InteractionGraph g;
  for (const auto& [edge, stamped] : latest) {
    g.user_adj[edge.first][edge.second] = stamped.second;
    g.item_adj[edge.second][edge.first] = stamped.second;
  }
  return g;
}

std::vector<std::string> candidate_users(const InteractionGraph& graph,
                                         const std::string& u0) {
  const auto it = graph.user_adj.find(u0);
  if (it == graph.user_adj.end()) {
    throw DataError("unknown user " + u0);
  }
  // Users sharing >= 2 items with u0: exactly the union over u0's item
  // pairs of the pair's common raters, without materializing the pairs.
  std::unordered_map<std::string, int> shared_count;
  for (const auto& [item, rating] : it->second) {
    const auto raters = graph.item_adj.find(item);
    if (raters == graph.item_adj.end()) {
      continue;
    }
    for (const auto& [user, r] : raters->second) {
      if (user != u0) {
        ++shared_count[user];
      }
    }
  }
  std::vector<std::string> out;
  for (const auto& [user, count] : shared_count) {
    if (count >= 2) {
      out.push_back(user);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::string> shared_items(const InteractionGraph& graph,
                                      const std::string& u0,
                                      const std::string& u1) {
  const auto& a = graph.user_adj.at(u0);
  const auto& b = graph.user_adj.at(u1);
  std::vector<std::string> shared;
  for (const auto& [item, rating] : a) {
    if (b.count(item) != 0) {
      shared.push_back(item);  // map order keeps this ascending
    }
  }
  return shared;
}

InteractionChain make_chain(const InteractionGraph& graph,
                            const std::string& u0, const std::string& u1,
                            const std::string& i0, const std::string& i1) {
  InteractionChain c;
  c.u0 = u0;
  c.u1 = u1;
  c.i0 = i0;
  c.i1 = i1;
  c.r_u0_i0 = graph.user_adj.at(u0).at(i0);
  c.r_u1_i0 = graph.user_adj.at(u1).at(i0);
  c.r_u1_i1 = graph.user_adj.at(u1).at(i1);
  c.r_u0_i1 = graph.user_adj.at(u0).at(i1);
  return c;
}

InteractionChain sample_chain_from(const InteractionGraph& graph,
                                   const std::string& u0,
                                   const std::vector<std::string>& cands,
                                   Rng& rng) {
  const std::string& u1 = cands[rng.below(cands.size())];
  const std::vector<std::string> shared = shared_items(graph, u0, u1);
  const auto pick = rng.sample_indices(shared.size(), 2);
  std::string i0 = shared[pick[0]];
  std::string i1 = shared[pick[1]];
  if (rng.below(2) == 1) {
    std::swap(i0, i1);
  }
  return make_chain(graph, u0, u1, i0, i1);
}

}  // namespace

InteractionChain sample_chain(const InteractionGraph& graph,
                              const std::string& u0, Rng& rng) {
  const std::vector<std::string> cands = candidate_users(graph, u0);
  if (cands.empty()) {
    throw DataError("no chain available for user " + u0);
  }
  return sample_chain_from(graph, u0, cands, rng);
}

std::vector<InteractionChain> sample_chains(const InteractionGraph& graph,
                                            const std::string& u0, int k,
                                            Rng& rng) {
  std::vector<InteractionChain> out;
  if (k <= 0) {
    return out;
  }
  const std::vector<std::string> cands = candidate_users(graph, u0);
  if (cands.empty()) {
    return out;
  }
  std::uint64_t supply = 0;
  for (const std::string& u1 : cands) {
    const auto s =
        static_cast<std::uint64_t>(shared_items(graph, u0, u1).size());
    supply += s * (s - 1) / 2;
  }
  const std::uint64_t target =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(k), supply);

  using Key = std::tuple<std::string, std::string, std::string>;
  std::set<Key> seen;
  const auto key_of = [](const InteractionChain& c) {
    auto [lo, hi] = std::minmax(c.i0, c.i1);
    return Key{c.u1, lo, hi};
  };

  // Rejection sampling covers the common case; the sweep below guarantees
  // termination when the distinct-pair supply is nearly exhausted.
  std::uint64_t attempts = 0;
  const std::uint64_t budget = 16ull * static_cast<std::uint64_t>(k) + 64ull;
  while (out.size() < target && attempts < budget) {
    ++attempts;
    InteractionChain c = sample_chain_from(graph, u0, cands, rng);
    if (seen.insert(key_of(c)).second) {
      out.push_back(std::move(c));
    }
  }
  for (std::size_t ci = 0; out.size() < target && ci < cands.size(); ++ci) {
    const std::string& u1 = cands[ci];
    const std::vector<std::string> shared = shared_items(graph, u0, u1);
    for (std::size_t a = 0; a < shared.size() && out.size() < target; ++a) {
      for (std::size_t b = a + 1; b < shared.size() && out.size() < target;
           ++b) {
        if (seen.count({u1, shared[a], shared[b]}) != 0) {
          continue;
        }
        std::string i0 = shared[a];
        std::string i1 = shared[b];
        if (rng.below(2) == 1) {
          std::swap(i0, i1);
        }
        InteractionChain c = make_chain(graph, u0, u1, i0, i1);
        seen.insert(key_of(c));
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace r2rec::graph
