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
#ifndef R2REC_RNG_HPP_
#define R2REC_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace r2rec {

/// FNV-1a over the bytes of `data`.
std::uint64_t fnv1a64(std::string_view data);

/// One splitmix64 output step for `x`.
std::uint64_t splitmix64(std::uint64_t x);

/// Stable per-entity seed: mixes a global seed with a string tag (e.g. a
/// user id) so work items can be generated concurrently yet reproducibly.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag);

/// Deterministic RNG with platform-independent derived draws.
///
/// std::mt19937_64 raw output is specified by the standard; all bounded /
/// real draws are built on it directly (no std::*_distribution, whose
/// output is implementation-defined), so identical seeds give identical
/// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [0, n). n = 0 or 1 returns 0 without consuming state.
  std::uint64_t below(std::uint64_t n);

  /// Uniform double in [0, 1) with 53 random bits.
  double real01();

  /// Standard normal via Box-Muller on real01 draws.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  /// One index from the categorical distribution given by `probs`
  /// (assumed non-negative; normalized internally by their sum).
  std::size_t categorical(const std::vector<double>& probs);

 private:
  std::mt19937_64 gen_;
};

}  // namespace r2rec

#endif  // R2REC_RNG_HPP_
