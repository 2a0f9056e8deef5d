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

#include "clarityfuse/types.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace clarityfuse {

void validate_scores(const ScoreVector& x, const char* what) {
  if (x.values.empty()) {
    throw std::invalid_argument(std::string(what) + " is empty (m must be >= 1)");
  }
  for (double v : x.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " '" + x.instance_id +
                                  "' has a non-finite entry");
    }
  }
}

TrainingBank::TrainingBank(std::vector<ScoreVector> positives,
                           std::vector<ScoreVector> negatives)
    : positives_(std::move(positives)), negatives_(std::move(negatives)) {
  if (positives_.empty()) {
    throw std::invalid_argument("training bank: empty positive class");
  }
  if (negatives_.empty()) {
    throw std::invalid_argument("training bank: empty negative class");
  }
  dim_ = positives_.front().dim();
  for (const auto* side : {&positives_, &negatives_}) {
    for (const ScoreVector& x : *side) {
      validate_scores(x, "training score vector");
      if (x.dim() != dim_) {
        throw std::invalid_argument("training bank: ragged dimensions (vector '" +
                                    x.instance_id + "' has " +
                                    std::to_string(x.dim()) + " scores, expected " +
                                    std::to_string(dim_) + ")");
      }
    }
  }
}

TrainingBank build_bank(const std::vector<LabeledInstance>& instances) {
  std::vector<ScoreVector> pos;
  std::vector<ScoreVector> neg;
  for (const LabeledInstance& inst : instances) {
    if (inst.label != 0 && inst.label != 1) {
      throw std::invalid_argument("build_bank: label of '" + inst.scores.instance_id +
                                  "' must be 0 or 1");
    }
    (inst.label == 1 ? pos : neg).push_back(inst.scores);
  }
  return TrainingBank(std::move(pos), std::move(neg));
}

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("weight vector is empty");
  }
  double sq = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("weight vector has a non-finite entry");
    }
    if (v < 0.0) {
      throw std::invalid_argument("weight vector has a negative entry");
    }
    sq += v * v;
  }
  if (std::fabs(std::sqrt(sq) - 1.0) > 1e-9) {
    throw std::invalid_argument("weight vector is not unit L2 norm (|w| = " +
                                std::to_string(std::sqrt(sq)) + ")");
  }
}

WeightVector WeightVector::uniform(std::size_t m) {
  if (m == 0) {
    throw std::invalid_argument("weight vector dimension must be >= 1");
  }
  return WeightVector(std::vector<double>(m, 1.0 / std::sqrt(static_cast<double>(m))));
}

double fused_score(const WeightVector& w, const ScoreVector& x) {
  if (w.dim() != x.dim()) {
    throw std::invalid_argument("fused_score: dimension mismatch (weights " +
                                std::to_string(w.dim()) + ", scores " +
                                std::to_string(x.dim()) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    s += w[i] * x.values[i];
  }
  return s;
}

const char* to_string(Direction d) {
  return d == Direction::Maximized ? "maximized" : "minimized";
}

}  // namespace clarityfuse
