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

#ifndef CLARITYFUSE_EVAL_HPP_
#define CLARITYFUSE_EVAL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clarityfuse/optimizer.hpp"
#include "clarityfuse/ranking.hpp"
#include "clarityfuse/types.hpp"

namespace clarityfuse {

/// Average precision of a ranked 0/1 label sequence:
///   AP = sum_i P(i) * [label_i = 1] / N+
/// where P(i) is the fraction of the top i entries that are positive.
/// Throws if the sequence has no positive label.
double average_precision(std::span<const int> ranked_labels);

/// Arithmetic mean of per-class APs. Throws on an empty list.
double mean_average_precision(std::span<const double> per_class_aps);

struct AlphaSelection {
  double alpha = 0.0;
  double ap = 0.0;
  std::vector<std::pair<double, double>> table;  // (alpha, ap) in grid order
};

/// Grid search for the sharpness: for each alpha, learns weights on the
/// validation instances (labels hidden from the learner), ranks by the given
/// criterion and scores AP against the held labels. The best AP wins; exact
/// AP ties go to the smallest alpha. criterion must be WeightedScore or
/// RawClarity.
AlphaSelection select_alpha(std::span<const double> grid,
                            const std::vector<LabeledInstance>& validation,
                            const TrainingBank& bank,
                            const OptimizerConfig& cfg_template,
                            RankCriterion criterion, unsigned threads = 1);

struct CorruptionSpec {
  std::vector<std::size_t> classifier_indices;
  double fraction = 0.2;  // share of test points corrupted per classifier
  double sigma = 0.0;     // stddev of the additive Gaussian noise
  std::uint64_t seed = 0;
};

/// For each listed classifier, picks round(fraction * n) test rows uniformly
/// at random (independently per classifier) and adds N(0, sigma) noise to
/// that coordinate. Every untouched entry is bit-identical to the input.
/// Deterministic given the seed.
std::vector<ScoreVector> corrupt_scores(std::span<const ScoreVector> test,
                                        const CorruptionSpec& spec);

/// Class-conditional Gaussian score generator, a desk-scale stand-in for
/// real per-classifier score tables. Mean/std vectors hold either one entry
/// (applied to every classifier) or m entries.
struct SynthSpec {
  std::size_t m = 1;
  std::size_t n_train_pos = 1;
  std::size_t n_train_neg = 1;
  std::size_t n_test = 10;
  std::vector<double> pos_mean{0.7};
  std::vector<double> neg_mean{0.3};
  std::vector<double> pos_std{0.15};
  std::vector<double> neg_std{0.15};
  double test_pos_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct SynthData {
  TrainingBank bank;
  std::vector<LabeledInstance> test;
};

SynthData generate_synthetic(const SynthSpec& spec);

struct ExperimentMode {
  enum class Kind { Average, WeightedScore, RawClarity, NBestAverage, NBestWeighted };
  Kind kind = Kind::Average;
  std::size_t n = 0;  // N-best size; ignored by the other kinds

  static ExperimentMode average() { return {Kind::Average, 0}; }
  static ExperimentMode weighted_score() { return {Kind::WeightedScore, 0}; }
  static ExperimentMode raw_clarity() { return {Kind::RawClarity, 0}; }
  static ExperimentMode nbest_average(std::size_t n) { return {Kind::NBestAverage, n}; }
  static ExperimentMode nbest_weighted(std::size_t n) { return {Kind::NBestWeighted, n}; }

  std::string name() const;
};

struct InstanceDiagnostics {
  std::string instance_id;
  std::vector<double> weights;
  double rcl = 0.0;
  Direction direction = Direction::Maximized;
  std::vector<std::size_t> selected;  // N-best modes only
  double ranking_score = 0.0;
};

struct ExperimentReport {
  ExperimentMode mode;
  double ap = 0.0;
  RankedList ranking;
  std::vector<InstanceDiagnostics> per_instance;  // empty for Average
};

/// Ranks precomputed solutions under one mode and scores AP against the test
/// labels. Average ignores `solutions` (pass an empty span).
ExperimentReport rank_and_score(const std::vector<LabeledInstance>& test,
                                std::span<const ClaritySolution> solutions,
                                const ExperimentMode& mode);

/// Full single-mode run: learns weights where the mode needs them, ranks,
/// and reports AP plus per-instance diagnostics.
ExperimentReport run_experiment(const TrainingBank& bank,
                                const std::vector<LabeledInstance>& test,
                                const OptimizerConfig& cfg,
                                const ExperimentMode& mode, unsigned threads = 1);

/// Rank test instances by the plain mean of all classifier scores (the
/// average-fusion baseline; no learning involved).
RankedList rank_by_average(std::span<const ScoreVector> scores);

}  // namespace clarityfuse

#endif  // CLARITYFUSE_EVAL_HPP_
