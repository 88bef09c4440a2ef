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
#include "r2rec/reward.hpp"

#include <algorithm>
#include <string>

#include "r2rec/errors.hpp"

namespace r2rec::reward {

double step_reward(int num_steps) {
  if (num_steps < 0) {
    throw DataError("step_reward: negative step count " + std::to_string(num_steps));
  }
  return std::min(1.0, static_cast<double>(num_steps) / 4.0);
}

double correctness_reward(int gt_rank) {
  if (gt_rank < 1 || gt_rank > 20) {
    throw DataError("correctness_reward: rank " + std::to_string(gt_rank) +
                    " outside [1, 20]");
  }
  if (gt_rank == 1) return 1.0;
  if (gt_rank <= 3) return 0.7;
  if (gt_rank <= 5) return 0.5;
  if (gt_rank <= 10) return 0.2;
  return 0.0;
}

RewardBreakdown total_reward(double step, double correctness) {
  if (!(step >= 0.0 && step <= 1.0)) {
    throw DataError("total_reward: step component outside [0, 1]");
  }
  const bool known = correctness == 0.0 || correctness == 0.2 ||
                     correctness == 0.5 || correctness == 0.7 ||
                     correctness == 1.0;
  if (!known) {
    throw DataError("total_reward: correctness component is not a piecewise value");
  }
  RewardBreakdown b;
  b.step_reward = step;
  b.correctness_reward = correctness;
  b.total = 1.0 * step + 2.0 * correctness;
  return b;
}

}  // namespace r2rec::reward
