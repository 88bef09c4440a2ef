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
#include "r2rec/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace r2rec::metrics {

double hit_at_k(int gt_rank, int k) {
  if (gt_rank < 1) {
    throw std::invalid_argument("hit_at_k: rank must be 1-based");
  }
  if (k < 1) {
    throw std::invalid_argument("hit_at_k: cutoff must be positive");
  }
  return gt_rank <= k ? 1.0 : 0.0;
}

double ndcg_at_k(int gt_rank, int k) {
  if (gt_rank < 1) {
    throw std::invalid_argument("ndcg_at_k: rank must be 1-based");
  }
  if (k < 1) {
    throw std::invalid_argument("ndcg_at_k: cutoff must be positive");
  }
  if (gt_rank > k) {
    return 0.0;
  }
  return 1.0 / std::log2(static_cast<double>(gt_rank) + 1.0);
}

std::map<std::string, MetricSummary> evaluate_runs(
    const std::vector<std::vector<int>>& ranks_per_run,
    const std::vector<int>& cutoffs) {
  if (ranks_per_run.empty()) {
    throw std::invalid_argument("evaluate_runs: no runs");
  }
  std::map<std::string, std::vector<double>> per_run_means;
  for (const auto& ranks : ranks_per_run) {
    if (ranks.empty()) {
      throw std::invalid_argument("evaluate_runs: empty run");
    }
    for (int k : cutoffs) {
      double hit = 0.0;
      double ndcg = 0.0;
      for (int rank : ranks) {
        hit += hit_at_k(rank, k);
        ndcg += ndcg_at_k(rank, k);
      }
      const auto n = static_cast<double>(ranks.size());
      per_run_means["hit@" + std::to_string(k)].push_back(hit / n);
      per_run_means["ndcg@" + std::to_string(k)].push_back(ndcg / n);
    }
  }
  std::map<std::string, MetricSummary> out;
  for (const auto& [key, values] : per_run_means) {
    MetricSummary s;
    s.runs = static_cast<int>(values.size());
    for (double v : values) {
      s.mean += v;
    }
    s.mean /= static_cast<double>(s.runs);
    double var = 0.0;
    for (double v : values) {
      var += (v - s.mean) * (v - s.mean);
    }
    s.std_dev = std::sqrt(var / static_cast<double>(s.runs));
    out[key] = s;
  }
  return out;
}

EvalReport aggregate(
    const std::vector<std::map<std::string, int>>& ranks_per_run,
    const std::vector<int>& cutoffs) {
  if (ranks_per_run.empty()) {
    throw std::invalid_argument("aggregate: no runs");
  }
  const auto& first = ranks_per_run.front();
  if (first.empty()) {
    throw std::invalid_argument("aggregate: empty run");
  }
  std::vector<std::vector<int>> rank_lists;
  rank_lists.reserve(ranks_per_run.size());
  for (const auto& run : ranks_per_run) {
    if (run.size() != first.size()) {
      throw std::invalid_argument("aggregate: user sets differ across runs");
    }
    std::vector<int> ranks;
    ranks.reserve(run.size());
    for (const auto& [user, rank] : run) {
      if (first.find(user) == first.end()) {
        throw std::invalid_argument("aggregate: user sets differ across runs");
      }
      ranks.push_back(rank);
    }
    rank_lists.push_back(std::move(ranks));
  }

  EvalReport report;
  report.n_users = static_cast<int>(first.size());
  report.n_runs = static_cast<int>(ranks_per_run.size());
  report.metrics = evaluate_runs(rank_lists, cutoffs);
  for (const auto& run : rank_lists) {
    for (int k : cutoffs) {
      double hit = 0.0;
      double ndcg = 0.0;
      for (int rank : run) {
        hit += hit_at_k(rank, k);
        ndcg += ndcg_at_k(rank, k);
      }
      const auto n = static_cast<double>(run.size());
      report.per_run["hit@" + std::to_string(k)].push_back(hit / n);
      report.per_run["ndcg@" + std::to_string(k)].push_back(ndcg / n);
    }
  }
  return report;
}

std::string render_table(const EvalReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %10s %10s   per-run\n", "metric",
                "mean", "std");
  out += line;
  for (const auto& [name, summary] : report.metrics) {
    std::snprintf(line, sizeof(line), "%-10s %10.6f %10.6f  ", name.c_str(),
                  summary.mean, summary.std_dev);
    out += line;
    const auto it = report.per_run.find(name);
    if (it != report.per_run.end()) {
      for (double v : it->second) {
        std::snprintf(line, sizeof(line), " %.6f", v);
        out += line;
      }
    }
    out += "\n";
  }
  std::snprintf(line, sizeof(line), "users=%d runs=%d\n", report.n_users,
                report.n_runs);
  out += line;
  return out;
}

}  // namespace r2rec::metrics
