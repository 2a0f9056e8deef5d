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

// Acceptance suite: every release-gating property of the fusion engine, one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clarityfuse/clarity.hpp"
#include "clarityfuse/eval.hpp"
#include "clarityfuse/io.hpp"
#include "clarityfuse/optimizer.hpp"
#include "clarityfuse/random.hpp"
#include "clarityfuse/ranking.hpp"
#include "clarityfuse/types.hpp"

using namespace clarityfuse;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<bool(std::string&)> check;
};

ScoreVector sv(std::vector<double> values, std::string id = "x") {
  return ScoreVector{std::move(id), std::move(values)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---- 1: exact losses on the single-axis reference configuration ----------

bool check_figure1(std::string& detail) {
  TrainingBank bank(
      {sv({0.05}, "p0"), sv({0.15}, "p1"), sv({0.25}, "p2"), sv({0.35}, "p3"),
       sv({0.40}, "p4"), sv({0.45}, "p5"), sv({0.90}, "p6")},
      {sv({0.10}, "n0"), sv({0.20}, "n1"), sv({0.30}, "n2")});
  const ScoreVector x_u = sv({0.5}, "u");
  const std::vector<double> w{1.0};
  const double rl = relevance_exact(x_u, w, bank);
  const double il = irrelevance_exact(x_u, w, bank);
  const double cl = clarity_exact(x_u, w, bank);
  detail = "RL=" + fmt(rl) + " IL=" + fmt(il) + " CL=" + fmt(cl);
  return rl == 0.0 && il == 6.0 / 7.0 && cl == 6.0 / 7.0;
}

// ---- 2: smoothed losses converge to exact ones at alpha = 1e4 ------------

bool check_indicator_limit(std::string& detail) {
  std::mt19937_64 rng(20260808);
  const SigmoidSharpness alpha(1e4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    // tie-free configuration: resample until every margin clears 2e-3
    while (true) {
      const std::size_t m = 1 + bounded_uint(rng, 4);
      const std::size_t n_pos = 1 + bounded_uint(rng, 20);
      const std::size_t n_neg = 1 + bounded_uint(rng, 20);
      auto draw = [&](std::string id) {
        ScoreVector x{std::move(id), std::vector<double>(m)};
        for (double& v : x.values) {
          v = unit_double(rng);
        }
        return x;
      };
      std::vector<ScoreVector> pos, neg;
      for (std::size_t i = 0; i < n_pos; ++i) {
        pos.push_back(draw("p" + std::to_string(i)));
      }
      for (std::size_t i = 0; i < n_neg; ++i) {
        neg.push_back(draw("n" + std::to_string(i)));
      }
      const ScoreVector x_u = draw("u");
      std::vector<double> raw(m);
      for (double& v : raw) {
        v = unit_double(rng) + 1e-3;
      }
      const WeightVector w = project_feasible(raw).weights;

      TrainingBank bank(std::move(pos), std::move(neg));
      auto fuse = [&](const ScoreVector& x) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          s += w[j] * x.values[j];
        }
        return s;
      };
      const double s_u = fuse(x_u);
      bool tie_free = true;
      for (const auto* side : {&bank.positives(), &bank.negatives()}) {
        for (const ScoreVector& x : *side) {
          tie_free = tie_free && std::fabs(fuse(x) - s_u) >= 2e-3;
        }
      }
      if (!tie_free) {
        continue;
      }
      const double d_rl = std::fabs(relevance_smooth(x_u, w.span(), bank, alpha) -
                                    relevance_exact(x_u, w.span(), bank));
      const double d_il = std::fabs(irrelevance_smooth(x_u, w.span(), bank, alpha) -
                                    irrelevance_exact(x_u, w.span(), bank));
      worst = std::max({worst, d_rl, d_il});
      break;
    }
  }
  detail = "max |smooth - exact| = " + fmt(worst) + " over 200 instances";
  return worst < 1e-3;
}

// ---- 3: analytic gradient vs central finite differences ------------------

bool check_gradient(std::string& detail) {
  std::mt19937_64 rng(31337);
  double worst_excess = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + bounded_uint(rng, 6);
    const std::size_t n_pos = 1 + bounded_uint(rng, 15);
    const std::size_t n_neg = 1 + bounded_uint(rng, 15);
    auto draw = [&](std::string id) {
      ScoreVector x{std::move(id), std::vector<double>(m)};
      for (double& v : x.values) {
        v = unit_double(rng);
      }
      return x;
    };
    std::vector<ScoreVector> pos, neg;
    for (std::size_t i = 0; i < n_pos; ++i) {
      pos.push_back(draw("p" + std::to_string(i)));
    }
    for (std::size_t i = 0; i < n_neg; ++i) {
      neg.push_back(draw("n" + std::to_string(i)));
    }
    TrainingBank bank(std::move(pos), std::move(neg));
    const ScoreVector x_u = draw("u");
    std::vector<double> raw(m);
    for (double& v : raw) {
      v = unit_double(rng) + 1e-3;
    }
    const WeightVector w = project_feasible(raw).weights;
    const SigmoidSharpness alpha(0.5 + 49.5 * unit_double(rng));

    const std::vector<double> g = rcl_gradient(x_u, w.span(), bank, alpha);
    const double h = 1e-6;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> lo(w.span().begin(), w.span().end());
      std::vector<double> hi = lo;
      lo[j] -= h;
      hi[j] += h;
      const double fd =
          (rcl_smooth(x_u, hi, bank, alpha) - rcl_smooth(x_u, lo, bank, alpha)) /
          (2.0 * h);
      const double allowed = std::max(1e-5 * std::fabs(fd), 1e-9);
      const double err = std::fabs(g[j] - fd);
      worst_excess = std::max(worst_excess, err / allowed);
      ok = ok && err <= allowed;
    }
  }
  detail = "worst error/allowance = " + fmt(worst_excess) + " over 100 configs";
  return ok;
}

// ---- 4: projection properties ---------------------------------------------

bool check_projection(std::string& detail) {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + bounded_uint(rng, 8);
    std::vector<double> v(m);
    for (double& x : v) {
      x = 20.0 * unit_double(rng) - 10.0;
    }
    const ProjectionResult once = project_feasible(v);
    double sq = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (once.weights[j] < 0.0) {
        detail = "negative entry after projection";
        return false;
      }
      sq += once.weights[j] * once.weights[j];
    }
    if (std::fabs(std::sqrt(sq) - 1.0) > 1e-9) {
      detail = "norm off by " + fmt(std::fabs(std::sqrt(sq) - 1.0));
      return false;
    }
    const ProjectionResult twice = project_feasible(once.weights.span());
    for (std::size_t j = 0; j < m; ++j) {
      if (std::fabs(twice.weights[j] - once.weights[j]) > 1e-12) {
        detail = "projection is not idempotent";
        return false;
      }
    }
  }
  const ProjectionResult degenerate =
      project_feasible(std::vector<double>{-3.0, 0.0, -0.5});
  if (!degenerate.degenerate) {
    detail = "all-nonpositive input did not raise the degenerate flag";
    return false;
  }
  const double u = 1.0 / std::sqrt(3.0);
  for (std::size_t j = 0; j < 3; ++j) {
    if (degenerate.weights[j] != u) {
      detail = "degenerate fallback is not the uniform point";
      return false;
    }
  }
  detail = "1000 random vectors feasible and idempotent, fallback uniform";
  return true;
}

// ---- 5: learned |RCL| vs exhaustive m=2 arc sweep -------------------------

bool check_grid_optimality(std::string& detail) {
  std::mt19937_64 rng(9001);
  GaussianSampler gauss;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_pos = 3 + bounded_uint(rng, 13);
    const std::size_t n_neg = 3 + bounded_uint(rng, 13);
    std::vector<double> pos_mean(2), neg_mean(2), sd(2);
    for (std::size_t j = 0; j < 2; ++j) {
      pos_mean[j] = 0.3 + 0.6 * unit_double(rng);
      neg_mean[j] = pos_mean[j] - (0.1 + 0.5 * unit_double(rng));
      sd[j] = 0.05 + 0.25 * unit_double(rng);
    }
    auto draw = [&](bool positive, std::size_t i) {
      ScoreVector x{(positive ? "p" : "n") + std::to_string(i),
                    std::vector<double>(2)};
      for (std::size_t j = 0; j < 2; ++j) {
        x.values[j] =
            (positive ? pos_mean[j] : neg_mean[j]) + sd[j] * gauss.next(rng);
      }
      return x;
    };
    std::vector<ScoreVector> pos, neg;
    for (std::size_t i = 0; i < n_pos; ++i) {
      pos.push_back(draw(true, i));
    }
    for (std::size_t i = 0; i < n_neg; ++i) {
      neg.push_back(draw(false, i));
    }
    TrainingBank bank(std::move(pos), std::move(neg));
    ScoreVector x_u{"u", {unit_double(rng), unit_double(rng)}};

    OptimizerConfig cfg;
    cfg.alpha = SigmoidSharpness(1.0 + 9.0 * unit_double(rng));
    const ClaritySolution sol = learn_weights(x_u, bank, cfg);

    double grid_best = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const double t = (std::numbers::pi / 2.0) * static_cast<double>(i) / 999.0;
      const std::vector<double> w{std::cos(t), std::sin(t)};
      grid_best = std::max(grid_best,
                           std::fabs(rcl_smooth(x_u, w, bank, cfg.alpha)));
    }
    worst_gap = std::max(worst_gap, grid_best - std::fabs(sol.rcl));
  }
  detail = "worst grid gap = " + fmt(worst_gap) + " over 50 banks (limit 0.02)";
  return worst_gap <= 0.02;
}

// ---- 6: uniform-weight ranking equals an independent mean sort ------------

bool check_average_equivalence(std::string& detail) {
  std::mt19937_64 rng(606060);
  for (int set = 0; set < 100; ++set) {
    const std::size_t m = 1 + bounded_uint(rng, 6);
    const std::size_t n = 2 + bounded_uint(rng, 50);
    std::vector<ScoreVector> scores;
    std::vector<ClaritySolution> sols;
    for (std::size_t i = 0; i < n; ++i) {
      ScoreVector x{"i" + std::to_string(i), std::vector<double>(m)};
      for (double& v : x.values) {
        v = unit_double(rng);
      }
      scores.push_back(std::move(x));
      sols.push_back(ClaritySolution{WeightVector::uniform(m)});
    }
    // duplicated rows exercise the stable tie rule
    if (n >= 4) {
      scores[n - 1].values = scores[0].values;
      scores[n - 2].values = scores[1].values;
    }

    std::vector<double> means(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : scores[i].values) {
        s += v;
      }
      means[i] = s / static_cast<double>(m);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return means[a] > means[b];
    });

    const RankedList list = rank_by_weighted_score(scores, sols);
    for (std::size_t i = 0; i < n; ++i) {
      if (list.entries[i].original_index != order[i]) {
        detail = "argsort mismatch in set " + std::to_string(set) + " at rank " +
                 std::to_string(i);
        return false;
      }
    }
  }
  detail = "argsort identity held on 100 random test sets";
  return true;
}

// ---- 7: AP against hand values and a brute-force oracle -------------------

double ap_bruteforce(const std::vector<int>& labels) {
  std::size_t n_pos = 0;
  for (int l : labels) {
    n_pos += static_cast<std::size_t>(l);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) {
      continue;
    }
    std::size_t pos_at_i = 0;
    for (std::size_t k = 0; k <= i; ++k) {
      pos_at_i += static_cast<std::size_t>(labels[k]);
    }
    acc += static_cast<double>(pos_at_i) / static_cast<double>(i + 1);
  }
  return acc / static_cast<double>(n_pos);
}

bool check_ap(std::string& detail) {
  if (average_precision(std::vector<int>{1, 1, 0}) != 1.0) {
    detail = "[1,1,0] != 1";
    return false;
  }
  if (std::fabs(average_precision(std::vector<int>{0, 1, 1}) - 7.0 / 12.0) > 1e-15) {
    detail = "[0,1,1] != 7/12";
    return false;
  }
  if (std::fabs(average_precision(std::vector<int>{1, 0, 1, 0}) - 5.0 / 6.0) >
      1e-15) {
    detail = "[1,0,1,0] != 5/6";
    return false;
  }
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + bounded_uint(rng, 60);
    std::vector<int> labels(n);
    for (int& l : labels) {
      l = static_cast<int>(bounded_uint(rng, 2));
    }
    labels[bounded_uint(rng, n)] = 1;
    if (average_precision(labels) != ap_bruteforce(labels)) {
      detail = "brute-force mismatch on trial " + std::to_string(trial);
      return false;
    }
  }
  detail = "3 hand values and 500 brute-force sequences matched exactly";
  return true;
}

// ---- 8: synthetic analog of the noisy-classifier study --------------------

bool check_noise_robustness(std::string& detail) {
  double sum_nbest = 0.0;
  double sum_avg = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec spec;
    spec.m = 5;
    spec.n_train_pos = 40;
    spec.n_train_neg = 40;
    spec.n_test = 200;
    spec.pos_mean = {0.7};
    spec.neg_mean = {0.3};
    spec.pos_std = {0.15};
    spec.neg_std = {0.15};
    spec.seed = seed;
    SynthData data = generate_synthetic(spec);

    std::mt19937_64 pick(seed * 1000 + 17);
    CorruptionSpec corruption;
    corruption.classifier_indices = {bounded_uint(pick, spec.m)};
    corruption.fraction = 0.2;
    corruption.sigma = 1.0;
    corruption.seed = seed * 1000 + 23;

    std::vector<ScoreVector> scores;
    for (const LabeledInstance& li : data.test) {
      scores.push_back(li.scores);
    }
    scores = corrupt_scores(scores, corruption);
    std::vector<LabeledInstance> corrupted = data.test;
    for (std::size_t i = 0; i < corrupted.size(); ++i) {
      corrupted[i].scores = scores[i];
    }

    OptimizerConfig cfg;
    cfg.alpha = SigmoidSharpness(10.0);
    const ExperimentReport nbest = run_experiment(data.bank, corrupted, cfg,
                                                  ExperimentMode::nbest_average(4));
    const ExperimentReport avg =
        run_experiment(data.bank, corrupted, cfg, ExperimentMode::average());
    sum_nbest += nbest.ap;
    sum_avg += avg.ap;
  }
  const double mean_nbest = sum_nbest / 10.0;
  const double mean_avg = sum_avg / 10.0;
  detail = "mean MAP nbest-avg(4) = " + fmt(mean_nbest) +
           ", average fusion = " + fmt(mean_avg) + " over 10 seeds";
  return mean_nbest > mean_avg;
}

// ---- 9: N = m reduction identities and the m = 1 pin ----------------------

bool check_reductions(std::string& detail) {
  std::mt19937_64 rng(9099);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + bounded_uint(rng, 6);
    std::vector<double> raw(m);
    for (double& v : raw) {
      v = unit_double(rng) + 0.01;
    }
    const WeightVector w = project_feasible(raw).weights;
    ScoreVector x{"x", std::vector<double>(m)};
    for (double& v : x.values) {
      v = 2.0 * unit_double(rng) - 1.0;
    }
    const NBestSelection all = select_n_best(w, m);
    if (nbest_weighted_score(x, w, all) != fused_score(w, x)) {
      detail = "nbest-weighted at N=m differs from the full fusion score";
      return false;
    }
    double mean = 0.0;
    for (double v : x.values) {
      mean += v;
    }
    mean /= static_cast<double>(m);
    if (nbest_average_score(x, all) != mean) {
      detail = "nbest-average at N=m differs from the plain mean";
      return false;
    }
  }

  TrainingBank bank({sv({0.8}, "p0"), sv({0.7}, "p1")},
                    {sv({0.2}, "n0"), sv({0.3}, "n1")});
  OptimizerConfig cfg;
  cfg.alpha = SigmoidSharpness(6.0);
  const ClaritySolution sol = learn_weights(sv({0.55}, "u"), bank, cfg);
  if (sol.weights.dim() != 1 || sol.weights[0] != 1.0) {
    detail = "m=1 learning did not return weight [1]";
    return false;
  }
  detail = "bit-exact reductions on 40 random draws; m=1 weight is [1]";
  return true;
}

// ---- 10: byte-identical experiment reruns ---------------------------------

int run_cli(const std::string& args) {
  const int status = std::system(args.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

bool check_determinism(std::string& detail) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("clarityfuse-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const std::string bin = CLARITYFUSE_BIN;
  const std::string train = (dir / "train.csv").string();
  const std::string test = (dir / "test.csv").string();
  bool ok = true;

  ok = ok && run_cli(bin + " synth --m 4 --n-train-pos 15 --n-train-neg 15" +
                     " --n-test 30 --seed 11 --train-out " + train +
                     " --test-out " + test + " > /dev/null") == 0;
  const std::string base = bin + " experiment --train " + train + " --test " + test +
                           " --alpha 10 --classifiers 2 --fraction 0.2 --sigma 1.0" +
                           " --seed 11 --out ";
  const std::string rep1 = (dir / "rep1.txt").string();
  const std::string rep2 = (dir / "rep2.txt").string();
  ok = ok && run_cli(base + rep1 + " --solutions-out " + (dir / "s1.csv").string() +
                     " > " + (dir / "out1.txt").string()) == 0;
  ok = ok && run_cli(base + rep2 + " --solutions-out " + (dir / "s2.csv").string() +
                     " > " + (dir / "out2.txt").string()) == 0;
  if (!ok) {
    detail = "CLI invocation failed";
  } else if (slurp(rep1) != slurp(rep2)) {
    detail = "report files differ between reruns";
    ok = false;
  } else if (slurp(dir / "out1.txt") != slurp(dir / "out2.txt")) {
    detail = "stdout differs between reruns";
    ok = false;
  } else if (slurp(dir / "s1.csv") != slurp(dir / "s2.csv")) {
    detail = "solutions files differ between reruns";
    ok = false;
  } else if (slurp(rep1).empty()) {
    detail = "empty report";
    ok = false;
  } else {
    detail = "report, stdout and solutions byte-identical across reruns";
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact losses on the reference configuration", check_figure1},
      {2, "indicator limit at alpha = 1e4", check_indicator_limit},
      {3, "analytic gradient vs finite differences", check_gradient},
      {4, "feasible-set projection properties", check_projection},
      {5, "m=2 grid-sweep optimality", check_grid_optimality},
      {6, "uniform-weight ranking equals mean sort", check_average_equivalence},
      {7, "average precision oracle", check_ap},
      {8, "noise robustness of N-best selection", check_noise_robustness},
      {9, "N=m reductions and the m=1 pin", check_reductions},
      {10, "byte-identical experiment reruns", check_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::printf("%s %2d %-45s [%5lld ms] %s\n", ok ? "PASS" : "FAIL", c.number,
                c.name.c_str(), static_cast<long long>(ms), detail.c_str());
    failures += ok ? 0 : 1;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
