/*
 * Copyright 2026 The clarityfuse authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "clarityfuse/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace clarityfuse {

namespace {

void check_parallel(std::span<const ScoreVector> scores,
                    std::span<const ClaritySolution> solutions) {
  if (scores.size() != solutions.size()) {
    throw std::invalid_argument("ranking: " + std::to_string(scores.size()) +
                                " score vectors vs " +
                                std::to_string(solutions.size()) + " solutions");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].dim() != solutions[i].weights.dim()) {
      throw std::invalid_argument("ranking: dimension mismatch for instance '" +
                                  scores[i].instance_id + "'");
    }
  }
}

// descending: true for score-like criteria, false for raw clarity
RankedList sort_entries(std::vector<RankedEntry> entries, RankCriterion criterion,
                        bool descending) {
  std::stable_sort(entries.begin(), entries.end(),
                   [descending](const RankedEntry& a, const RankedEntry& b) {
                     return descending ? a.ranking_score > b.ranking_score
                                       : a.ranking_score < b.ranking_score;
                   });
  return RankedList{std::move(entries), criterion};
}

}  // namespace

const char* to_string(RankCriterion c) {
  switch (c) {
    case RankCriterion::Average:
      return "average";
    case RankCriterion::WeightedScore:
      return "weighted";
    case RankCriterion::RawClarity:
      return "raw-clarity";
    case RankCriterion::NBestAverage:
      return "nbest-avg";
    case RankCriterion::NBestWeighted:
      return "nbest-weighted";
  }
  return "unknown";
}

RankCriterion rank_criterion_from_string(const std::string& s) {
  if (s == "average") return RankCriterion::Average;
  if (s == "weighted") return RankCriterion::WeightedScore;
  if (s == "raw-clarity") return RankCriterion::RawClarity;
  if (s == "nbest-avg") return RankCriterion::NBestAverage;
  if (s == "nbest-weighted") return RankCriterion::NBestWeighted;
  throw std::invalid_argument("unknown ranking criterion '" + s + "'");
}

RankedList rank_by_weighted_score(std::span<const ScoreVector> scores,
                                  std::span<const ClaritySolution> solutions) {
  check_parallel(scores, solutions);
  std::vector<RankedEntry> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    entries.push_back({scores[i].instance_id,
                       fused_score(solutions[i].weights, scores[i]), i});
  }
  return sort_entries(std::move(entries), RankCriterion::WeightedScore, true);
}

RankedList rank_by_raw_clarity(std::span<const ScoreVector> scores,
                               std::span<const ClaritySolution> solutions) {
  check_parallel(scores, solutions);
  std::vector<RankedEntry> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    entries.push_back({scores[i].instance_id, solutions[i].rcl, i});
  }
  return sort_entries(std::move(entries), RankCriterion::RawClarity, false);
}

NBestSelection select_n_best(const WeightVector& w, std::size_t n,
                             std::string instance_id) {
  if (n < 1 || n > w.dim()) {
    throw std::invalid_argument("select_n_best: n = " + std::to_string(n) +
                                " outside [1, " + std::to_string(w.dim()) + "]");
  }
  std::vector<std::size_t> order(w.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable sort keeps the smaller classifier index first among equal weights
  std::stable_sort(order.begin(), order.end(),
                   [&w](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  order.resize(n);
  std::sort(order.begin(), order.end());
  return NBestSelection{std::move(instance_id), std::move(order)};
}

double nbest_average_score(const ScoreVector& x, const NBestSelection& sel) {
  if (sel.selected.empty()) {
    throw std::invalid_argument("nbest_average_score: empty selection");
  }
  double s = 0.0;
  for (std::size_t i : sel.selected) {
    if (i >= x.dim()) {
      throw std::invalid_argument("nbest_average_score: classifier index " +
                                  std::to_string(i) + " out of range");
    }
    s += x.values[i];
  }
  return s / static_cast<double>(sel.selected.size());
}

double nbest_weighted_score(const ScoreVector& x, const WeightVector& w,
                            const NBestSelection& sel, bool renormalize) {
  if (sel.selected.empty()) {
    throw std::invalid_argument("nbest_weighted_score: empty selection");
  }
  if (w.dim() != x.dim()) {
    throw std::invalid_argument("nbest_weighted_score: dimension mismatch");
  }
  double s = 0.0;
  double wsum = 0.0;
  for (std::size_t i : sel.selected) {
    if (i >= x.dim()) {
      throw std::invalid_argument("nbest_weighted_score: classifier index " +
                                  std::to_string(i) + " out of range");
    }
    s += w[i] * x.values[i];
    wsum += w[i];
  }
  if (renormalize) {
    if (wsum <= 0.0) {
      throw std::invalid_argument(
          "nbest_weighted_score: selected weights sum to zero, cannot renormalize");
    }
    s /= wsum;
  }
  return s;
}

RankedList rank_by_nbest(std::span<const ScoreVector> scores,
                         std::span<const ClaritySolution> solutions,
                         std::size_t n, bool weighted) {
  check_parallel(scores, solutions);
  std::vector<RankedEntry> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    NBestSelection sel = select_n_best(solutions[i].weights, n, scores[i].instance_id);
    const double s = weighted
                         ? nbest_weighted_score(scores[i], solutions[i].weights, sel)
                         : nbest_average_score(scores[i], sel);
    entries.push_back({scores[i].instance_id, s, i});
  }
  return sort_entries(std::move(entries), weighted ? RankCriterion::NBestWeighted
                                                   : RankCriterion::NBestAverage,
                      true);
}

}  // namespace clarityfuse
