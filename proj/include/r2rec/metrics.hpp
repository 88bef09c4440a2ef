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
#ifndef R2REC_METRICS_HPP_
#define R2REC_METRICS_HPP_

#include <map>
#include <string>
#include <vector>

namespace r2rec::metrics {

/// 1 if the ground truth sits within the top k positions, else 0.
/// gt_rank is 1-based; throws on gt_rank < 1 or k < 1.
double hit_at_k(int gt_rank, int k);

/// 1 / log2(gt_rank + 1) when gt_rank <= k, else 0. With a single relevant
/// item the ideal DCG is 1, so this is already normalized. At k = 1 this
/// collapses to hit_at_k.
double ndcg_at_k(int gt_rank, int k);

struct MetricSummary {
  double mean = 0.0;
  double std_dev = 0.0;  // population std over runs
  int runs = 0;
};

/// Per-run metric values averaged over instances, then summarized across
/// runs. Keys are "hit@k" / "ndcg@k" for each requested cutoff.
///
/// ranks_per_run[r] holds the 1-based ground-truth ranks observed in run r.
/// Runs may have different instance counts; each run is averaged before the
/// cross-run summary so no run is overweighted. Throws on empty input or an
/// empty run.
std::map<std::string, MetricSummary> evaluate_runs(
    const std::vector<std::vector<int>>& ranks_per_run,
    const std::vector<int>& cutoffs);

/// Aggregated multi-run evaluation: per-user metrics averaged within each
/// run, then across runs, keeping per-run values for variance reporting.
struct EvalReport {
  std::map<std::string, MetricSummary> metrics;
  std::map<std::string, std::vector<double>> per_run;  // metric -> run means
  int n_users = 0;
  int n_runs = 0;
};

/// ranks_per_run[r] maps user -> 1-based ground-truth rank in run r. All
/// runs must cover the same user set; throws on mismatch or empty input.
EvalReport aggregate(
    const std::vector<std::map<std::string, int>>& ranks_per_run,
    const std::vector<int>& cutoffs);

/// Fixed-width text table of an EvalReport, one metric per row.
std::string render_table(const EvalReport& report);

}  // namespace r2rec::metrics

#endif  // R2REC_METRICS_HPP_
