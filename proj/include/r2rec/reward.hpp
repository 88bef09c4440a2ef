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
#ifndef R2REC_REWARD_HPP_
#define R2REC_REWARD_HPP_

namespace r2rec::reward {

/// Per-rollout reward components. The total is the fixed weighted sum
/// 1 * step_reward + 2 * correctness_reward, so it lies in [0, 3].
struct RewardBreakdown {
  double step_reward = 0.0;
  double correctness_reward = 0.0;
  double total = 0.0;
};

/// Reasoning-length shaping: min(1.0, num_steps / 4). Saturates at four
/// steps so neither curt nor rambling traces are favored further.
/// Throws on negative input.
double step_reward(int num_steps);

/// Piecewise ranking reward on the 1-based rank of the ground-truth item
/// within the 20-candidate list:
///   rank 1 -> 1.0, ranks 2-3 -> 0.7, ranks 4-5 -> 0.5,
///   ranks 6-10 -> 0.2, ranks 11-20 -> 0.0.
/// Throws when rank is outside [1, 20].
double correctness_reward(int gt_rank);

/// Weighted combination of the two components. Inputs are validated:
/// step must lie in [0, 1] and correctness must be one of the five
/// piecewise values.
RewardBreakdown total_reward(double step, double correctness);

}  // namespace r2rec::reward

#endif  // R2REC_REWARD_HPP_
