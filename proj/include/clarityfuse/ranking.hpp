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

#ifndef CLARITYFUSE_RANKING_HPP_
#define CLARITYFUSE_RANKING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "clarityfuse/types.hpp"

namespace clarityfuse {

enum class RankCriterion {
  Average,         // descending mean of all classifier scores (baseline)
  WeightedScore,   // descending w'x
  RawClarity,      // ascending optimal RCL (closest to -1 first)
  NBestAverage,    // descending mean of the N-best scores
  NBestWeighted,   // descending weighted sum over the N-best scores
};

const char* to_string(RankCriterion c);
RankCriterion rank_criterion_from_string(const std::string& s);

struct RankedEntry {
  std::string instance_id;
  double ranking_score = 0.0;
  std::size_t original_index = 0;
};

/// Ordering of test instances. Ties always break by ascending original
/// (ingestion) index, so sorting is stable and reruns reproduce it.
struct RankedList {
  std::vector<RankedEntry> entries;
  RankCriterion criterion = RankCriterion::WeightedScore;
};

/// The N classifiers with the largest weights for one instance. Weight ties
/// break toward the smaller classifier index; `selected` is kept ascending.
struct NBestSelection {
  std::string instance_id;
  std::vector<std::size_t> selected;

  std::size_t n() const { return selected.size(); }
};

/// Descending order of fused_score(w_u, x_u). scores and solutions are
/// parallel arrays, as produced by learn_batch.
RankedList rank_by_weighted_score(std::span<const ScoreVector> scores,
                                  std::span<const ClaritySolution> solutions);

/// Ascending order of optimal RCL: positives are expected near -1, so the
/// most negative raw clarity ranks first.
RankedList rank_by_raw_clarity(std::span<const ScoreVector> scores,
                               std::span<const ClaritySolution> solutions);

NBestSelection select_n_best(const WeightVector& w, std::size_t n,
                             std::string instance_id = {});

/// Arithmetic mean of the selected entries of x.
double nbest_average_score(const ScoreVector& x, const NBestSelection& sel);

/// Sum of w[i]*x[i] over the selected classifiers. The truncated weights are
/// not renormalized unless asked: every instance's list is ranked by the one
/// rule, and renormalizing would shift cross-instance comparisons.
double nbest_weighted_score(const ScoreVector& x, const WeightVector& w,
                            const NBestSelection& sel, bool renormalize = false);

/// N-best ranking over a batch: per instance, select against its learned
/// weights and score by plain average (weighted=false) or weighted sum.
RankedList rank_by_nbest(std::span<const ScoreVector> scores,
                         std::span<const ClaritySolution> solutions,
                         std::size_t n, bool weighted);

}  // namespace clarityfuse

#endif  // CLARITYFUSE_RANKING_HPP_
