# Copyright 2026 The R2Rec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Numeric and parsing primitives of the R2Rec pipeline.

The heavy lifting (corpus ingest, chain sampling, prompt building, rollout
collection, evaluation) lives in the `r2rec` command-line tool; this module
exposes the pieces that are useful standalone: reward shaping, GRPO group
advantages and KL/surrogate numerics, ranking metrics, response parsers,
and deterministic seed derivation.
"""

from ._r2rec import (
    DataError,
    ParseError,
    correctness_reward,
    derive_seed,
    extract_ranking,
    extract_rating,
    extract_reasoning,
    group_advantages,
    hit_at_k,
    kl_estimate,
    ndcg_at_k,
    softmax,
    step_reward,
    total_reward,
    toy_grpo_train,
)

__all__ = [
    "DataError",
    "ParseError",
    "correctness_reward",
    "derive_seed",
    "extract_ranking",
    "extract_rating",
    "extract_reasoning",
    "group_advantages",
    "hit_at_k",
    "kl_estimate",
    "ndcg_at_k",
    "softmax",
    "step_reward",
    "total_reward",
    "toy_grpo_train",
]
