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

#include "clarityfuse/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "clarityfuse/random.hpp"

namespace clarityfuse {

double average_precision(std::span<const int> ranked_labels) {
  std::size_t n_pos = 0;
  for (int l : ranked_labels) {
    if (l != 0 && l != 1) {
      throw std::invalid_argument("average_precision: labels must be 0 or 1");
    }
    n_pos += static_cast<std::size_t>(l);
  }
  if (n_pos == 0) {
    throw std::invalid_argument("average_precision: no positive labels in the list");
  }
  double acc = 0.0;
  std::size_t seen_pos = 0;
  for (std::size_t i = 0; i < ranked_labels.size(); ++i) {
    if (ranked_labels[i] == 1) {
      ++seen_pos;
      acc += static_cast<double>(seen_pos) / static_cast<double>(i + 1);
    }
  }
  return acc / static_cast<double>(n_pos);
}

double mean_average_precision(std::span<const double> per_class_aps) {
  if (per_class_aps.empty()) {
    throw std::invalid_argument("mean_average_precision: empty AP list");
  }
  double s = 0.0;
  for (double ap : per_class_aps) {
    s += ap;
  }
  return s / static_cast<double>(per_class_aps.size());
}

namespace {

std::vector<ScoreVector> strip_labels(const std::vector<LabeledInstance>& labeled) {
  std::vector<ScoreVector> scores;
  scores.reserve(labeled.size());
  for (const LabeledInstance& li : labeled) {
    scores.push_back(li.scores);
  }
  return scores;
}

// Labels of `test` reordered by the ranked list.
std::vector<int> labels_in_rank_order(const RankedList& list,
                                      const std::vector<LabeledInstance>& test) {
  std::vector<int> labels;
  labels.reserve(list.entries.size());
  for (const RankedEntry& e : list.entries) {
    labels.push_back(test[e.original_index].label);
  }
  return labels;
}

std::vector<ClaritySolution> unwrap_batch(std::vector<LearnOutcome> outcomes) {
  std::vector<ClaritySolution> solutions;
  solutions.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok()) {
      throw std::runtime_error("weight learning failed for instance " +
                               std::to_string(i) + ": " + outcomes[i].error);
    }
    solutions.push_back(std::move(*outcomes[i].solution));
  }
  return solutions;
}

double broadcast_at(const std::vector<double>& v, std::size_t j, const char* what,
                    std::size_t m) {
  if (v.size() == 1) {
    return v[0];
  }
  if (v.size() != m) {
    throw std::invalid_argument(std::string("synthetic spec: ") + what +
                                " must have 1 or m entries");
  }
  return v[j];
}

}  // namespace

AlphaSelection select_alpha(std::span<const double> grid,
                            const std::vector<LabeledInstance>& validation,
                            const TrainingBank& bank,
                            const OptimizerConfig& cfg_template,
                            RankCriterion criterion, unsigned threads) {
  if (grid.empty()) {
    throw std::invalid_argument("select_alpha: empty alpha grid");
  }
  if (criterion != RankCriterion::WeightedScore &&
      criterion != RankCriterion::RawClarity) {
    throw std::invalid_argument(
        "select_alpha: criterion must be weighted-score or raw-clarity");
  }
  bool any_pos = false;
  bool any_neg = false;
  for (const LabeledInstance& li : validation) {
    (li.label == 1 ? any_pos : any_neg) = true;
  }
  if (!any_pos || !any_neg) {
    throw std::invalid_argument("select_alpha: validation set needs both labels");
  }

  const std::vector<ScoreVector> scores = strip_labels(validation);
  AlphaSelection out;
  bool have_best = false;
  for (double a : grid) {
    OptimizerConfig cfg = cfg_template;
    cfg.alpha = SigmoidSharpness(a);
    std::vector<ClaritySolution> sols =
        unwrap_batch(learn_batch(scores, bank, cfg, threads));
    RankedList list = criterion == RankCriterion::WeightedScore
                          ? rank_by_weighted_score(scores, sols)
                          : rank_by_raw_clarity(scores, sols);
    const double ap = average_precision(labels_in_rank_order(list, validation));
    out.table.emplace_back(a, ap);
    if (!have_best || ap > out.ap || (ap == out.ap && a < out.alpha)) {
      have_best = true;
      out.alpha = a;
      out.ap = ap;
    }
  }
  return out;
}

std::vector<ScoreVector> corrupt_scores(std::span<const ScoreVector> test,
                                        const CorruptionSpec& spec) {
  if (spec.fraction < 0.0 || spec.fraction > 1.0) {
    throw std::invalid_argument("corruption: fraction must be in [0,1]");
  }
  if (spec.sigma < 0.0 || !std::isfinite(spec.sigma)) {
    throw std::invalid_argument("corruption: sigma must be finite and >= 0");
  }
  std::vector<ScoreVector> out(test.begin(), test.end());
  if (out.empty()) {
    return out;
  }
  const std::size_t m = out.front().dim();
  for (std::size_t c : spec.classifier_indices) {
    if (c >= m) {
      throw std::invalid_argument("corruption: classifier index " +
                                  std::to_string(c) + " out of range (m = " +
                                  std::to_string(m) + ")");
    }
  }

  const std::size_t n = out.size();
  const auto k = static_cast<std::size_t>(
      std::llround(spec.fraction * static_cast<double>(n)));
  std::mt19937_64 rng(spec.seed);
  GaussianSampler gauss;
  for (std::size_t c : spec.classifier_indices) {
    // partial Fisher-Yates: the first k slots end up holding the chosen rows
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + bounded_uint(rng, n - i);
      std::swap(rows[i], rows[j]);
    }
    if (spec.sigma == 0.0) {
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) {
      out[rows[i]].values[c] += spec.sigma * gauss.next(rng);
    }
  }
  return out;
}

SynthData generate_synthetic(const SynthSpec& spec) {
  if (spec.m < 1 || spec.n_train_pos < 1 || spec.n_train_neg < 1 ||
      spec.n_test < 1) {
    throw std::invalid_argument("synthetic spec: all counts must be >= 1");
  }
  if (spec.test_pos_fraction < 0.0 || spec.test_pos_fraction > 1.0) {
    throw std::invalid_argument("synthetic spec: test_pos_fraction must be in [0,1]");
  }
  for (const auto* v : {&spec.pos_std, &spec.neg_std}) {
    for (double s : *v) {
      if (s < 0.0 || !std::isfinite(s)) {
        throw std::invalid_argument("synthetic spec: stddev must be finite and >= 0");
      }
    }
  }

  std::mt19937_64 rng(spec.seed);
  GaussianSampler gauss;
  auto draw = [&](bool positive, std::size_t j) {
    const double mean = positive ? broadcast_at(spec.pos_mean, j, "pos_mean", spec.m)
                                 : broadcast_at(spec.neg_mean, j, "neg_mean", spec.m);
    const double sd = positive ? broadcast_at(spec.pos_std, j, "pos_std", spec.m)
                               : broadcast_at(spec.neg_std, j, "neg_std", spec.m);
    return sd == 0.0 ? mean : mean + sd * gauss.next(rng);
  };
  auto make_vector = [&](const std::string& id, bool positive) {
    ScoreVector x{id, std::vector<double>(spec.m)};
    for (std::size_t j = 0; j < spec.m; ++j) {
      x.values[j] = draw(positive, j);
    }
    return x;
  };

  std::vector<ScoreVector> pos;
  pos.reserve(spec.n_train_pos);
  for (std::size_t i = 0; i < spec.n_train_pos; ++i) {
    pos.push_back(make_vector("pos" + std::to_string(i), true));
  }
  std::vector<ScoreVector> neg;
  neg.reserve(spec.n_train_neg);
  for (std::size_t i = 0; i < spec.n_train_neg; ++i) {
    neg.push_back(make_vector("neg" + std::to_string(i), false));
  }

  const auto n_test_pos = static_cast<std::size_t>(
      std::llround(spec.test_pos_fraction * static_cast<double>(spec.n_test)));
  std::vector<LabeledInstance> test;
  test.reserve(spec.n_test);
  for (std::size_t i = 0; i < spec.n_test; ++i) {
    const bool positive = i < n_test_pos;
    test.push_back({make_vector("t" + std::to_string(i), positive),
                    positive ? 1 : 0});
  }

  return SynthData{TrainingBank(std::move(pos), std::move(neg)), std::move(test)};
}

std::string ExperimentMode::name() const {
  switch (kind) {
    case Kind::Average:
      return "average";
    case Kind::WeightedScore:
      return "weighted";
    case Kind::RawClarity:
      return "raw-clarity";
    case Kind::NBestAverage:
      return "nbest-avg(N=" + std::to_string(n) + ")";
    case Kind::NBestWeighted:
      return "nbest-weighted(N=" + std::to_string(n) + ")";
  }
  return "unknown";
}

RankedList rank_by_average(std::span<const ScoreVector> scores) {
  std::vector<RankedEntry> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double s = 0.0;
    for (double v : scores[i].values) {
      s += v;
    }
    entries.push_back(
        {scores[i].instance_id, s / static_cast<double>(scores[i].dim()), i});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RankedEntry& a, const RankedEntry& b) {
                     return a.ranking_score > b.ranking_score;
                   });
  return RankedList{std::move(entries), RankCriterion::Average};
}

ExperimentReport rank_and_score(const std::vector<LabeledInstance>& test,
                                std::span<const ClaritySolution> solutions,
                                const ExperimentMode& mode) {
  const std::vector<ScoreVector> scores = strip_labels(test);
  ExperimentReport report;
  report.mode = mode;

  RankedList list;
  switch (mode.kind) {
    case ExperimentMode::Kind::Average:
      list = rank_by_average(scores);
      break;
    case ExperimentMode::Kind::WeightedScore:
      list = rank_by_weighted_score(scores, solutions);
      break;
    case ExperimentMode::Kind::RawClarity:
      list = rank_by_raw_clarity(scores, solutions);
      break;
    case ExperimentMode::Kind::NBestAverage:
      list = rank_by_nbest(scores, solutions, mode.n, false);
      break;
    case ExperimentMode::Kind::NBestWeighted:
      list = rank_by_nbest(scores, solutions, mode.n, true);
      break;
  }

  if (mode.kind != ExperimentMode::Kind::Average) {
    if (solutions.size() != test.size()) {
      throw std::invalid_argument("rank_and_score: solutions do not match test set");
    }
    std::vector<double> score_by_index(test.size(), 0.0);
    for (const RankedEntry& e : list.entries) {
      score_by_index[e.original_index] = e.ranking_score;
    }
    report.per_instance.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      InstanceDiagnostics diag;
      diag.instance_id = scores[i].instance_id;
      diag.weights = solutions[i].weights.values();
      diag.rcl = solutions[i].rcl;
      diag.direction = solutions[i].direction;
      if (mode.kind == ExperimentMode::Kind::NBestAverage ||
          mode.kind == ExperimentMode::Kind::NBestWeighted) {
        diag.selected = select_n_best(solutions[i].weights, mode.n).selected;
      }
      diag.ranking_score = score_by_index[i];
      report.per_instance.push_back(std::move(diag));
    }
  }

  report.ap = average_precision(labels_in_rank_order(list, test));
  report.ranking = std::move(list);
  return report;
}

ExperimentReport run_experiment(const TrainingBank& bank,
                                const std::vector<LabeledInstance>& test,
                                const OptimizerConfig& cfg,
                                const ExperimentMode& mode, unsigned threads) {
  if (mode.kind == ExperimentMode::Kind::Average) {
    return rank_and_score(test, {}, mode);
  }
  const std::vector<ScoreVector> scores = strip_labels(test);
  std::vector<ClaritySolution> solutions =
      unwrap_batch(learn_batch(scores, bank, cfg, threads));
  return rank_and_score(test, solutions, mode);
}

}  // namespace clarityfuse
