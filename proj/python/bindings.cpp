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

// Python bindings for the numeric and parsing core: reward shaping, GRPO
// numerics, ranking metrics, response parsing, and seed derivation. The
// data pipeline itself (ingest, chain sampling, prompt building, rollout
// collection) stays behind the r2rec CLI, which owns file formats and
// endpoint handling.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "r2rec/errors.hpp"
#include "r2rec/grpo.hpp"
#include "r2rec/metrics.hpp"
#include "r2rec/parse.hpp"
#include "r2rec/reward.hpp"
#include "r2rec/rng.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_r2rec, m) {
  m.doc() = "Reward, GRPO, metric, and parsing primitives of the R2Rec "
            "pipeline";

  py::register_exception<r2rec::ParseError>(m, "ParseError",
                                            PyExc_ValueError);
  py::register_exception<r2rec::DataError>(m, "DataError", PyExc_ValueError);

  m.def("derive_seed", &r2rec::derive_seed, py::arg("global_seed"),
        py::arg("tag"),
        "Stable per-component seed derived from the global seed and a tag.");

  m.def("step_reward", &r2rec::reward::step_reward, py::arg("num_steps"),
        "min(1, n/4): saturating credit for reasoning length.");
  m.def("correctness_reward", &r2rec::reward::correctness_reward,
        py::arg("gt_rank"),
        "Piecewise credit for the ground-truth rank within the top 10.");
  m.def(
      "total_reward",
      [](int num_steps, int gt_rank) {
        const auto b = r2rec::reward::total_reward(
            r2rec::reward::step_reward(num_steps),
            r2rec::reward::correctness_reward(gt_rank));
        return py::make_tuple(b.step_reward, b.correctness_reward, b.total);
      },
      py::arg("num_steps"), py::arg("gt_rank"),
      "(step, correctness, total) with total = step + 2*correctness.");

  m.def("group_advantages", &r2rec::grpo::group_advantages,
        py::arg("rewards"), py::arg("std_floor") = 1e-8,
        "Group-relative advantages: (r - mean) / max(std, floor).");
  m.def("kl_estimate", &r2rec::grpo::kl_estimate, py::arg("logp_policy"),
        py::arg("logp_ref"),
        "Non-negative per-token k3 KL estimate, averaged over tokens.");
  m.def("softmax", &r2rec::grpo::softmax, py::arg("logits"));
  m.def(
      "toy_grpo_train",
      [](int arms, int steps, int group_size, double learning_rate,
         double beta, std::uint64_t seed) {
        r2rec::grpo::ToyTrainConfig cfg;
        cfg.group_size = group_size;
        cfg.learning_rate = learning_rate;
        cfg.grpo.beta = beta;
        r2rec::Rng rng(seed);
        std::vector<py::tuple> out;
        for (const auto& pt :
             r2rec::grpo::toy_grpo_train(arms, steps, cfg, rng)) {
          out.push_back(
              py::make_tuple(pt.step, pt.mean_reward, pt.expected_reward));
        }
        return out;
      },
      py::arg("arms") = 20, py::arg("steps") = 500, py::arg("group_size") = 8,
      py::arg("learning_rate") = 0.1, py::arg("beta") = 0.04,
      py::arg("seed") = 0,
      "Bandit verification task; returns (step, sampled_mean, "
      "expected_reward) points.");

  m.def("hit_at_k", &r2rec::metrics::hit_at_k, py::arg("gt_rank"),
        py::arg("k"));
  m.def("ndcg_at_k", &r2rec::metrics::ndcg_at_k, py::arg("gt_rank"),
        py::arg("k"));

  m.def("extract_rating", &r2rec::parse::extract_rating, py::arg("text"),
        "Final 1..5 rating from a reasoning trace; raises ParseError.");
  m.def(
      "extract_ranking",
      [](const std::string& text, const std::vector<std::string>& labels,
         const std::optional<std::string>& gt_label) {
        const auto r = r2rec::parse::extract_ranking(text, labels, gt_label);
        py::dict out;
        out["order"] = r.order;
        out["gt_rank"] = r.gt_rank;
        out["repaired"] = r.repaired;
        return out;
      },
      py::arg("text"), py::arg("labels"),
      py::arg("gt_label") = std::nullopt,
      "Candidate-label ranking with the ground-truth rank; repairs "
      "duplicates and omissions.");
  m.def(
      "extract_reasoning",
      [](const std::string& text) {
        const auto t = r2rec::parse::extract_reasoning(text);
        py::dict out;
        out["steps"] = t.steps;
        out["num_steps"] = t.num_steps;
        out["raw_span"] = t.raw_span;
        return out;
      },
      py::arg("text"), "Numbered reasoning steps with sentence fallback.");
}
