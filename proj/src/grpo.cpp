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
#include "r2rec/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "r2rec/errors.hpp"
#include "r2rec/reward.hpp"

namespace r2rec::grpo {

std::vector<double> group_advantages(const std::vector<double>& rewards,
                                     double std_floor) {
  if (rewards.empty()) {
    throw std::invalid_argument("group_advantages: empty group");
  }
  const auto n = static_cast<double>(rewards.size());
  const double mean =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rewards) {
    var += (r - mean) * (r - mean);
  }
  var /= n;  // population variance, matching per-group normalization
  const double denom = std::max(std::sqrt(var), std_floor);
  std::vector<double> adv(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    adv[i] = (rewards[i] - mean) / denom;
  }
  return adv;
}

double kl_estimate(const std::vector<double>& logp_policy,
                   const std::vector<double>& logp_ref) {
  if (logp_policy.size() != logp_ref.size()) {
    throw std::invalid_argument("kl_estimate: sequence length mismatch");
  }
  if (logp_policy.empty()) {
    return 0.0;
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < logp_policy.size(); ++t) {
    const double d = logp_ref[t] - logp_policy[t];
    acc += std::exp(d) - d - 1.0;
  }
  return acc / static_cast<double>(logp_policy.size());
}

namespace {

double sum(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0);
}

double clipped_term(double rho, double adv, double eps) {
  const double clipped = std::clamp(rho, 1.0 - eps, 1.0 + eps);
  return std::min(rho * adv, clipped * adv);
}

}  // namespace

double grpo_surrogate(const RolloutGroup& group, const GrpoConfig& cfg) {
  if (!group.logp_policy || !group.logp_old) {
    throw std::invalid_argument("grpo_surrogate: missing log-prob sequences");
  }
  const int g = group.size();
  if (g == 0) {
    throw std::invalid_argument("grpo_surrogate: empty group");
  }
  if (static_cast<int>(group.advantages.size()) != g ||
      static_cast<int>(group.logp_policy->size()) != g ||
      static_cast<int>(group.logp_old->size()) != g ||
      (group.logp_ref && static_cast<int>(group.logp_ref->size()) != g)) {
    throw std::invalid_argument("grpo_surrogate: ragged group");
  }
  double acc = 0.0;
  for (int i = 0; i < g; ++i) {
    const double rho =
        std::exp(sum((*group.logp_policy)[i]) - sum((*group.logp_old)[i]));
    acc += clipped_term(rho, group.advantages[i], cfg.eps_clip);
    if (group.logp_ref) {
      acc -= cfg.beta *
             kl_estimate((*group.logp_policy)[i], (*group.logp_ref)[i]);
    }
  }
  return acc / static_cast<double>(g);
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) {
    throw std::invalid_argument("softmax: empty logits");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    z += out[i];
  }
  for (double& p : out) {
    p /= z;
  }
  return out;
}

double toy_surrogate(const std::vector<double>& logits,
                     const std::vector<int>& arms,
                     const std::vector<double>& advantages,
                     const std::vector<double>& logp_old,
                     const std::optional<std::vector<double>>& logp_ref,
                     const GrpoConfig& cfg) {
  RolloutGroup group;
  group.advantages = advantages;
  group.rewards.assign(arms.size(), 0.0);  // unused by the surrogate
  const std::vector<double> probs = softmax(logits);
  std::vector<std::vector<double>> pol, old;
  pol.reserve(arms.size());
  old.reserve(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    pol.push_back({std::log(probs[arms[i]])});
    old.push_back({logp_old[i]});
  }
  group.logp_policy = std::move(pol);
  group.logp_old = std::move(old);
  if (logp_ref) {
    std::vector<std::vector<double>> ref;
    ref.reserve(logp_ref->size());
    for (double v : *logp_ref) {
      ref.push_back({v});
    }
    group.logp_ref = std::move(ref);
  }
  return grpo_surrogate(group, cfg);
}

std::vector<double> toy_surrogate_gradient(
    const std::vector<double>& logits, const std::vector<int>& arms,
    const std::vector<double>& advantages, const std::vector<double>& logp_old,
    const std::optional<std::vector<double>>& logp_ref, const GrpoConfig& cfg) {
  const std::size_t g = arms.size();
  if (advantages.size() != g || logp_old.size() != g ||
      (logp_ref && logp_ref->size() != g)) {
    throw std::invalid_argument("toy_surrogate_gradient: ragged group");
  }
  if (g == 0) {
    throw std::invalid_argument("toy_surrogate_gradient: empty group");
  }
  const std::vector<double> probs = softmax(logits);
  std::vector<double> grad(logits.size(), 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    const int a = arms[i];
    const double li = std::log(probs[a]);
    const double rho = std::exp(li - logp_old[i]);
    const double adv = advantages[i];
    // d/dl of min(rho A, clip(rho) A): the clipped branch is constant in l,
    // so the derivative is rho*A when the unclipped branch is the min.
    const bool clipped_out = (adv >= 0.0 && rho > 1.0 + cfg.eps_clip) ||
                             (adv < 0.0 && rho < 1.0 - cfg.eps_clip);
    double dsurr_dl = clipped_out ? 0.0 : rho * adv;
    if (logp_ref) {
      // d/dl of [exp(ref - l) - (ref - l) - 1] = 1 - exp(ref - l).
      dsurr_dl -= cfg.beta * (1.0 - std::exp((*logp_ref)[i] - li));
    }
    // Chain through dl/dlogit_j = delta_{j,a} - softmax_j.
    for (std::size_t j = 0; j < logits.size(); ++j) {
      const double jac = (static_cast<int>(j) == a ? 1.0 : 0.0) - probs[j];
      grad[j] += dsurr_dl * jac;
    }
  }
  for (double& v : grad) {
    v /= static_cast<double>(g);
  }
  return grad;
}

std::vector<TrajectoryPoint> toy_grpo_train(int policy_dim, int steps,
                                            const ToyTrainConfig& cfg,
                                            Rng& rng) {
  if (policy_dim < 2) {
    throw std::invalid_argument("toy_grpo_train: policy_dim must be >= 2");
  }
  if (steps <= 0) {
    throw std::invalid_argument("toy_grpo_train: steps must be positive");
  }
  if (cfg.group_size < 2) {
    throw std::invalid_argument("toy_grpo_train: group_size must be >= 2");
  }
  std::vector<double> arm_reward(policy_dim);
  for (int k = 0; k < policy_dim; ++k) {
    // Arm k stands for placing the ground truth at rank k+1. The step
    // component is saturated so the reward spans the full 1..3 scale.
    arm_reward[k] =
        reward::total_reward(1.0, reward::correctness_reward(k + 1)).total;
  }

  std::vector<double> logits(policy_dim, 0.0);
  const std::vector<double> ref_probs = softmax(logits);  // frozen reference

  std::vector<TrajectoryPoint> traj;
  traj.reserve(steps);
  for (int step = 0; step < steps; ++step) {
    const std::vector<double> probs = softmax(logits);

    std::vector<int> arms(cfg.group_size);
    std::vector<double> rewards(cfg.group_size);
    std::vector<double> logp_old(cfg.group_size);
    std::vector<double> logp_ref(cfg.group_size);
    for (int i = 0; i < cfg.group_size; ++i) {
      const int a = static_cast<int>(rng.categorical(probs));
      arms[i] = a;
      rewards[i] = arm_reward[a];
      logp_old[i] = std::log(probs[a]);  // single on-policy update per group
      logp_ref[i] = std::log(ref_probs[a]);
    }
    const std::vector<double> adv =
        group_advantages(rewards, cfg.grpo.std_floor);

    std::vector<double> grad = toy_surrogate_gradient(
        logits, arms, adv, logp_old, logp_ref, cfg.grpo);
    double norm = 0.0;
    for (double v : grad) {
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (cfg.max_grad_norm > 0.0 && norm > cfg.max_grad_norm) {
      const double scale = cfg.max_grad_norm / norm;
      for (double& v : grad) {
        v *= scale;
      }
    }
    for (int j = 0; j < policy_dim; ++j) {
      logits[j] += cfg.learning_rate * grad[j];
    }

    TrajectoryPoint pt;
    pt.step = step;
    pt.mean_reward = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                     static_cast<double>(cfg.group_size);
    const std::vector<double> post = softmax(logits);
    for (int k = 0; k < policy_dim; ++k) {
      pt.expected_reward += post[k] * arm_reward[k];
    }
    traj.push_back(pt);
  }
  return traj;
}

}  // namespace r2rec::grpo
