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

#ifndef CLARITYFUSE_CLARITY_HPP_
#define CLARITYFUSE_CLARITY_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "clarityfuse/types.hpp"

namespace clarityfuse {

/// Steepness of the sigmoid that stands in for the step indicator. Larger
/// values push the smooth losses toward the exact counting losses.
class SigmoidSharpness {
 public:
  explicit SigmoidSharpness(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Step indicator: 1 when t >= 0 (ties count), else 0.
int indicator_exact(double t);

/// 1 / (1 + exp(-alpha t)). Overflow-safe for any finite alpha*t.
double sigmoid(double t, SigmoidSharpness alpha);

// The weight argument of every loss below is a plain span rather than a
// WeightVector: callers evaluate at unnormalized points too (finite
// differences, scale identities), and the math never needs feasibility.

/// Fraction of negative training instances whose fused score is >= the
/// test instance's fused score. In [0,1].
double relevance_exact(const ScoreVector& x_u, std::span<const double> w,
                       const TrainingBank& bank);

/// Fraction of positive training instances whose fused score is <= the
/// test instance's fused score. In [0,1].
double irrelevance_exact(const ScoreVector& x_u, std::span<const double> w,
                         const TrainingBank& bank);

/// |relevance - irrelevance|, both exact. In [0,1].
double clarity_exact(const ScoreVector& x_u, std::span<const double> w,
                     const TrainingBank& bank);

/// Mean of sigmoid(w'(x_i - x_u)) over negatives. In (0,1).
double relevance_smooth(const ScoreVector& x_u, std::span<const double> w,
                        const TrainingBank& bank, SigmoidSharpness alpha);

/// Mean of sigmoid(w'(x_u - x_i)) over positives. In (0,1).
double irrelevance_smooth(const ScoreVector& x_u, std::span<const double> w,
                          const TrainingBank& bank, SigmoidSharpness alpha);

/// Smoothed raw clarity: relevance_smooth - irrelevance_smooth. In (-1,1).
/// Near -1 suggests a positive instance, near +1 a negative one.
double rcl_smooth(const ScoreVector& x_u, std::span<const double> w,
                  const TrainingBank& bank, SigmoidSharpness alpha);

/// Analytic gradient of rcl_smooth with respect to w:
///   (alpha/n0) sum_neg s'(z_i) d_i  -  (alpha/n1) sum_pos s'(z_i) e_i
/// with d_i = x_i - x_u over negatives, e_i = x_u - x_i over positives,
/// z_i = alpha * w'd_i (resp. w'e_i) and s'(z) = s(z)(1 - s(z)).
std::vector<double> rcl_gradient(const ScoreVector& x_u, std::span<const double> w,
                                 const TrainingBank& bank, SigmoidSharpness alpha);

/// Per-instance evaluator. The difference vectors (x_i - x_u) do not depend
/// on w, so they are materialized once here; the optimizer then calls rcl()
/// and gradient() every step against the cached rows.
class ClarityEvaluator {
 public:
  ClarityEvaluator(const ScoreVector& x_u, const TrainingBank& bank,
                   SigmoidSharpness alpha);

  std::size_t dim() const { return m_; }
  double alpha() const { return alpha_; }

  double relevance(std::span<const double> w) const;
  double irrelevance(std::span<const double> w) const;
  double rcl(std::span<const double> w) const;

  /// Writes the gradient of rcl at w into out (size m).
  void gradient(std::span<const double> w, std::span<double> out) const;

 private:
  std::size_t m_ = 0;
  std::size_t n_neg_ = 0;
  std::size_t n_pos_ = 0;
  double alpha_ = 1.0;
  std::vector<double> neg_diffs_;  // row-major n_neg x m, rows x_i - x_u
  std::vector<double> pos_diffs_;  // row-major n_pos x m, rows x_u - x_i
};

}  // namespace clarityfuse

#endif  // CLARITYFUSE_CLARITY_HPP_
