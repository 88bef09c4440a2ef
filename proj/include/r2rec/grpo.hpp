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
#ifndef R2REC_GRPO_HPP_
#define R2REC_GRPO_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "r2rec/rng.hpp"

namespace r2rec::grpo {

struct GrpoConfig {
  double eps_clip = 0.2;    // clip half-width for the importance ratio
  double beta = 0.04;       // KL penalty weight against the reference policy
  double std_floor = 1e-8;  // advantage denominator floor for degenerate groups
};

/// One group of completions sampled for the same prompt. The token
/// log-probability sequences are optional: they are only present when the
/// caller has token-level access to the policies (the toy trainer does; the
/// rollout collector does not).
struct RolloutGroup {
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::optional<std::vector<std::vector<double>>> logp_policy;
  std::optional<std::vector<std::vector<double>>> logp_old;
  std::optional<std::vector<std::vector<double>>> logp_ref;

  int size() const { return static_cast<int>(rewards.size()); }
};

/// Group-relative advantages: (r_i - mean) / max(population_std, std_floor).
/// A zero-variance group (including G = 1) yields all-zero advantages.
/// Throws on an empty group.
std::vector<double> group_advantages(const std::vector<double>& rewards,
                                     double std_floor = 1e-8);

/// Non-negative per-token KL estimate between aligned log-prob sequences,
/// averaged over tokens:
///   mean_t [ exp(ref_t - pol_t) - (ref_t - pol_t) - 1 ]
/// (the "k3" estimator). Empty sequences give 0. Throws on length mismatch.
double kl_estimate(const std::vector<double>& logp_policy,
                   const std::vector<double>& logp_ref);

/// Clipped-surrogate objective over a group, with sequence-level importance
/// ratios rho_i = exp(sum logp_policy_i - sum logp_old_i):
///
///   (1/G) sum_i min(rho_i A_i, clip(rho_i, 1-eps, 1+eps) A_i)
///     - beta * (1/G) sum_i kl_estimate(logp_policy_i, logp_ref_i)
///
/// The KL term is omitted when logp_ref is absent. Requires logp_policy and
/// logp_old plus computed advantages; throws otherwise.
double grpo_surrogate(const RolloutGroup& group, const GrpoConfig& cfg);

/// softmax(logits), numerically stabilized.
std::vector<double> softmax(const std::vector<double>& logits);

/// Objective value of grpo_surrogate for the toy categorical policy: each
/// rollout is a single drawn arm, so its log-prob "sequence" is the single
/// entry log softmax(logits)[arm]. logp_old/logp_ref hold those scalars for
/// the sampling and reference policies. Used by the trainer and by
/// finite-difference checks of the analytic gradient.
double toy_surrogate(const std::vector<double>& logits,
                     const std::vector<int>& arms,
                     const std::vector<double>& advantages,
                     const std::vector<double>& logp_old,
                     const std::optional<std::vector<double>>& logp_ref,
                     const GrpoConfig& cfg);

/// Analytic gradient of toy_surrogate with respect to the policy logits.
///
/// With l_i = log softmax(logits)[arm_i] and rho_i = exp(l_i - old_i), each
/// rollout contributes (d/dl_i) through the log-softmax Jacobian
/// (delta_{j,arm_i} - softmax_j):
///   surrogate part: rho_i * A_i when the unclipped branch is active
///                   (A_i >= 0 and rho_i <= 1+eps, or A_i < 0 and
///                    rho_i >= 1-eps), else 0;
///   KL part:        -beta * (1 - exp(ref_i - l_i)).
std::vector<double> toy_surrogate_gradient(
    const std::vector<double>& logits, const std::vector<int>& arms,
    const std::vector<double>& advantages, const std::vector<double>& logp_old,
    const std::optional<std::vector<double>>& logp_ref, const GrpoConfig& cfg);

struct ToyTrainConfig {
  int group_size = 8;
  double learning_rate = 0.1;
  double max_grad_norm = 1.0;  // global-norm clip; keeps huge-beta anchoring stable
  GrpoConfig grpo;
};

struct TrajectoryPoint {
  int step = 0;
  double mean_reward = 0.0;      // sampled group mean
  double expected_reward = 0.0;  // exact expectation under the current policy
};

/// Desk-scale GRPO verification task: a softmax policy over `policy_dim`
/// arms where pulling arm k counts as ranking the ground-truth item at
/// position k+1, rewarded with the full step+correctness total (the step
/// component is held at its saturated value, an additive constant the
/// group normalization removes). One clipped-surrogate ascent update per
/// sampled group; the reference policy is the initial (uniform) one.
/// Throws on non-positive dimensions or step counts.
std::vector<TrajectoryPoint> toy_grpo_train(int policy_dim, int steps,
                                            const ToyTrainConfig& cfg, Rng& rng);

}  // namespace r2rec::grpo

#endif  // R2REC_GRPO_HPP_
