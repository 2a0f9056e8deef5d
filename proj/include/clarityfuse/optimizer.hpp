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

#ifndef CLARITYFUSE_OPTIMIZER_HPP_
#define CLARITYFUSE_OPTIMIZER_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clarityfuse/clarity.hpp"
#include "clarityfuse/types.hpp"

namespace clarityfuse {

struct OptimizerConfig {
  double eta = 0.1;
  std::size_t max_iters = 1000;
  double tol = 1e-7;  // stop when |RCL_k - RCL_{k-1}| < tol
  SigmoidSharpness alpha{1.0};
  std::optional<WeightVector> init;  // nullopt: uniform

  /// Throws std::invalid_argument on a bad field or an init of wrong size.
  void validate(std::size_t m) const;
};

struct ProjectionResult {
  WeightVector weights;
  // All entries were <= 0, so clamping left the zero vector and the
  // projection fell back to the uniform point.
  bool degenerate = false;
};

/// Projection onto {w : w >= 0, |w|_2 = 1}: clamp negatives to zero, then
/// normalize. Idempotent.
ProjectionResult project_feasible(std::span<const double> v);

/// One gradient branch: the final point, the RCL there, and how many steps
/// were accepted before convergence.
struct BranchResult {
  WeightVector weights;
  double rcl = 0.0;
  std::size_t iterations = 0;
  bool degenerate_projection = false;
};

/// Projected gradient ascent on smoothed RCL from cfg.init (uniform by
/// default). A step is accepted only if it does not lower RCL; a worsening
/// step retries with a halved step size, so the accepted trace is
/// non-decreasing and the best point seen is the one returned.
BranchResult ascend(const ScoreVector& x_u, const TrainingBank& bank,
                    const OptimizerConfig& cfg);

/// Mirror of ascend: projected gradient descent, non-increasing trace.
BranchResult descend(const ScoreVector& x_u, const TrainingBank& bank,
                     const OptimizerConfig& cfg);

/// Runs both branches from the same initialization and keeps whichever has
/// the larger |RCL|. Ties (within 1e-12) go to the ascent branch.
ClaritySolution learn_weights(const ScoreVector& x_u, const TrainingBank& bank,
                              const OptimizerConfig& cfg);

struct LearnOutcome {
  std::optional<ClaritySolution> solution;
  std::string error;  // empty on success

  bool ok() const { return solution.has_value(); }
};

/// learn_weights over a batch. Per-instance failures are collected in the
/// corresponding slot instead of aborting the batch. Instances are
/// independent, so the result does not depend on thread count.
std::vector<LearnOutcome> learn_batch(std::span<const ScoreVector> instances,
                                      const TrainingBank& bank,
                                      const OptimizerConfig& cfg,
                                      unsigned threads = 1);

}  // namespace clarityfuse

#endif  // CLARITYFUSE_OPTIMIZER_HPP_
