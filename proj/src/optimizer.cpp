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

#include "clarityfuse/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

namespace clarityfuse {

namespace {

constexpr int kMaxHalvings = 40;  // eta * 2^-40 ~ 1e-13: effectively stuck

struct RawProjection {
  std::vector<double> values;
  bool degenerate = false;
};

RawProjection project_raw(std::span<const double> v) {
  RawProjection out;
  out.values.assign(v.begin(), v.end());
  double sq = 0.0;
  for (double& x : out.values) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("projection: non-finite input");
    }
    if (x < 0.0) {
      x = 0.0;
    }
    sq += x * x;
  }
  if (sq == 0.0) {
    out.values.assign(v.size(), 1.0 / std::sqrt(static_cast<double>(v.size())));
    out.degenerate = true;
    return out;
  }
  if (out.values.size() == 1) {
    out.values[0] = 1.0;  // the feasible set is the single point [1]
    return out;
  }
  if (std::fabs(sq - 1.0) < 1e-12) {
    return out;  // already on the sphere; skipping keeps projection idempotent
  }
  const double norm = std::sqrt(sq);
  for (double& x : out.values) {
    x /= norm;
  }
  return out;
}

// Shared ascent/descent loop; sign = +1 climbs RCL, -1 sinks it.
BranchResult optimize_branch(const ScoreVector& x_u, const TrainingBank& bank,
                             const OptimizerConfig& cfg, double sign) {
  cfg.validate(bank.dim());
  const std::size_t m = bank.dim();
  ClarityEvaluator eval(x_u, bank, cfg.alpha);

  RawProjection start = cfg.init ? project_raw(cfg.init->span())
                                 : project_raw(WeightVector::uniform(m).span());
  std::vector<double> w = start.values;
  bool degenerate = start.degenerate;
  double f = eval.rcl(w);

  std::vector<double> grad(m, 0.0);
  std::vector<double> cand(m, 0.0);
  std::size_t accepted = 0;

  for (std::size_t k = 0; k < cfg.max_iters; ++k) {
    eval.gradient(w, grad);
    double gnorm_sq = 0.0;
    for (double g : grad) {
      if (!std::isfinite(g)) {
        throw std::runtime_error("optimizer: non-finite gradient for instance '" +
                                 x_u.instance_id + "'");
      }
      gnorm_sq += g * g;
    }
    if (gnorm_sq == 0.0) {
      break;  // stationary everywhere relevant
    }

    double step = cfg.eta;
    bool moved = false;
    double f_new = f;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (std::size_t j = 0; j < m; ++j) {
        cand[j] = w[j] + sign * step * grad[j];
      }
      RawProjection proj = project_raw(cand);
      const double f_cand = eval.rcl(proj.values);
      if (sign * (f_cand - f) >= 0.0) {
        w = std::move(proj.values);
        degenerate = degenerate || proj.degenerate;
        f_new = f_cand;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      break;  // no non-worsening step even at the smallest step size
    }
    ++accepted;
    const double delta = std::fabs(f_new - f);
    f = f_new;
    if (delta < cfg.tol) {
      break;
    }
  }

  BranchResult out{WeightVector(std::move(w)), f, accepted, degenerate};
  return out;
}

}  // namespace

void OptimizerConfig::validate(std::size_t m) const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("optimizer: eta must be finite and > 0");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("optimizer: tol must be finite and > 0");
  }
  if (max_iters == 0) {
    throw std::invalid_argument("optimizer: max_iters must be >= 1");
  }
  if (init && init->dim() != m) {
    throw std::invalid_argument("optimizer: init dimension " +
                                std::to_string(init->dim()) + " does not match " +
                                std::to_string(m));
  }
}

ProjectionResult project_feasible(std::span<const double> v) {
  if (v.empty()) {
    throw std::invalid_argument("projection: empty vector");
  }
  RawProjection raw = project_raw(v);
  return ProjectionResult{WeightVector(std::move(raw.values)), raw.degenerate};
}

BranchResult ascend(const ScoreVector& x_u, const TrainingBank& bank,
                    const OptimizerConfig& cfg) {
  return optimize_branch(x_u, bank, cfg, +1.0);
}

BranchResult descend(const ScoreVector& x_u, const TrainingBank& bank,
                     const OptimizerConfig& cfg) {
  return optimize_branch(x_u, bank, cfg, -1.0);
}

ClaritySolution learn_weights(const ScoreVector& x_u, const TrainingBank& bank,
                              const OptimizerConfig& cfg) {
  BranchResult up = ascend(x_u, bank, cfg);
  BranchResult down = descend(x_u, bank, cfg);

  const bool anomaly = up.rcl < 0.0 || down.rcl > 0.0;
  const bool tie = std::fabs(std::fabs(up.rcl) - std::fabs(down.rcl)) <= 1e-12;
  const bool take_up = tie || std::fabs(up.rcl) > std::fabs(down.rcl);
  BranchResult& winner = take_up ? up : down;

  ClaritySolution sol{std::move(winner.weights),
                      winner.rcl,
                      take_up ? Direction::Maximized : Direction::Minimized,
                      up.iterations,
                      down.iterations,
                      cfg.alpha.value(),
                      up.degenerate_projection || down.degenerate_projection,
                      anomaly};
  return sol;
}

std::vector<LearnOutcome> learn_batch(std::span<const ScoreVector> instances,
                                      const TrainingBank& bank,
                                      const OptimizerConfig& cfg, unsigned threads) {
  std::vector<LearnOutcome> out(instances.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < instances.size(); i += stride) {
      try {
        out[i].solution = learn_weights(instances[i], bank, cfg);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };

  if (threads <= 1 || instances.size() <= 1) {
    work(0, 1);
    return out;
  }
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(instances.size()));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back(work, t, n);
  }
  for (std::thread& t : pool) {
    t.join();
  }
  return out;
}

}  // namespace clarityfuse
