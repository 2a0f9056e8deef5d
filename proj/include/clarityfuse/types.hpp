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

#ifndef CLARITYFUSE_TYPES_HPP_
#define CLARITYFUSE_TYPES_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace clarityfuse {

/// Outputs of the m base classifiers for one instance. Higher score means
/// the classifier ranks the instance higher. Scores may be any finite reals;
/// nothing restricts them to [0,1].
struct ScoreVector {
  std::string instance_id;
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  std::span<const double> span() const { return values; }
};

/// Throws std::invalid_argument if the vector is empty or holds a
/// non-finite entry. `what` names the vector in the message.
void validate_scores(const ScoreVector& x, const char* what = "score vector");

struct LabeledInstance {
  ScoreVector scores;
  int label = 0;  // 0 (negative) or 1 (positive)
};

/// Labeled training score vectors split by class. Immutable once built;
/// any number of threads may read one concurrently.
class TrainingBank {
 public:
  TrainingBank(std::vector<ScoreVector> positives,
               std::vector<ScoreVector> negatives);

  std::size_t dim() const { return dim_; }
  const std::vector<ScoreVector>& positives() const { return positives_; }
  const std::vector<ScoreVector>& negatives() const { return negatives_; }
  std::size_t num_positives() const { return positives_.size(); }
  std::size_t num_negatives() const { return negatives_.size(); }

 private:
  std::vector<ScoreVector> positives_;
  std::vector<ScoreVector> negatives_;
  std::size_t dim_ = 0;
};

/// Splits instances into a TrainingBank, preserving order within each class.
/// Throws if either class is empty, dimensions are ragged, or a score is
/// non-finite.
TrainingBank build_bank(const std::vector<LabeledInstance>& instances);

/// Fusion weights: every entry >= 0 and the L2 norm is 1 (within 1e-9).
/// The constructor enforces both.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> values);

  /// [1/sqrt(m), ..., 1/sqrt(m)], the symmetric feasible point.
  static WeightVector uniform(std::size_t m);

  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Weighted sum of scores, w'x. Throws on dimension mismatch.
double fused_score(const WeightVector& w, const ScoreVector& x);

enum class Direction { Maximized, Minimized };

const char* to_string(Direction d);

/// Result of the per-instance weight search: the winning weights, the
/// smoothed raw clarity there, and which gradient branch produced them.
struct ClaritySolution {
  WeightVector weights;
  double rcl = 0.0;
  Direction direction = Direction::Maximized;
  std::size_t ascent_iterations = 0;
  std::size_t descent_iterations = 0;
  double alpha = 1.0;
  // Diagnostics: projection hit the all-nonpositive fallback at least once,
  // or the two branches ended on the same sign (ascent < 0 or descent > 0).
  bool degenerate_projection = false;
  bool sign_anomaly = false;
};

}  // namespace clarityfuse

#endif  // CLARITYFUSE_TYPES_HPP_
