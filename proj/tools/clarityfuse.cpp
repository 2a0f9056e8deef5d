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

// clarityfuse: per-instance classifier fusion driven by the clarity index.
//
//   synth       write a seeded synthetic train/test score-table pair
//   learn       learn per-instance fusion weights for a test table
//   rank        order test instances by a ranking criterion
//   eval        AP / MAP of ranking files against ground-truth labels
//   corrupt     add seeded Gaussian noise to chosen classifier columns
//   alpha       pick the sigmoid sharpness on a validation split
//   experiment  run every fusion mode on one dataset and tabulate APs
//
// All outputs are deterministic given --seed; every command drops a
// <out>.manifest.json recording parameters and input digests.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clarityfuse/eval.hpp"
#include "clarityfuse/io.hpp"
#include "clarityfuse/optimizer.hpp"
#include "clarityfuse/ranking.hpp"
#include "clarityfuse/types.hpp"

namespace {

constexpr const char* kVersion = "clarityfuse 0.1.0";

using namespace clarityfuse;

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += io::format_double(v[i]);
  }
  return s;
}

void emit_manifest(const std::string& out_path, const std::string& command,
                   const std::map<std::string, std::string>& parameters,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  io::RunManifest m;
  m.command = command;
  m.version = kVersion;
  m.parameters = parameters;
  for (const std::string& in : inputs) {
    m.input_digests[in] = io::file_digest_hex(in);
  }
  m.outputs = outputs;
  io::write_manifest(out_path + ".manifest.json", m);
}

struct OptimizerFlags {
  double alpha = 10.0;
  double eta = 0.1;
  double tol = 1e-7;
  std::size_t max_iters = 1000;
  unsigned threads = 1;

  void attach(CLI::App* cmd, bool with_alpha = true) {
    if (with_alpha) {
      cmd->add_option("--alpha", alpha, "Sigmoid sharpness")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
    }
    cmd->add_option("--eta", eta, "Gradient step size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol", tol, "Convergence threshold on |dRCL|")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "Iteration cap per branch")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}))
        ->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads for batch learning")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
  }

  OptimizerConfig to_config() const {
    OptimizerConfig cfg;
    cfg.eta = eta;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.alpha = SigmoidSharpness(alpha);
    return cfg;
  }

  void record(std::map<std::string, std::string>& p, bool with_alpha = true) const {
    if (with_alpha) p["alpha"] = io::format_double(alpha);
    p["eta"] = io::format_double(eta);
    p["tol"] = io::format_double(tol);
    p["max_iters"] = std::to_string(max_iters);
    p["threads"] = std::to_string(threads);
  }
};

// Pairs a solutions file with a test table by instance id, keeping the test
// table's row order. Orphans on either side are an error.
std::vector<ClaritySolution> match_solutions(
    const std::vector<io::SolutionRecord>& records,
    const std::vector<ScoreVector>& test) {
  std::map<std::string, const ClaritySolution*> by_id;
  for (const io::SolutionRecord& r : records) {
    if (!by_id.emplace(r.instance_id, &r.solution).second) {
      throw std::runtime_error("duplicate solution id '" + r.instance_id + "'");
    }
  }
  std::vector<ClaritySolution> matched;
  std::vector<std::string> missing;
  std::set<std::string> used;
  for (const ScoreVector& x : test) {
    auto it = by_id.find(x.instance_id);
    if (it == by_id.end()) {
      missing.push_back(x.instance_id);
    } else {
      matched.push_back(*it->second);
      used.insert(x.instance_id);
    }
  }
  std::vector<std::string> extra;
  for (const auto& [id, _] : by_id) {
    if (!used.count(id)) {
      extra.push_back(id);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "solutions and test table do not correspond by id;";
    if (!missing.empty()) {
      msg += " test-only:";
      for (const std::string& id : missing) msg += " " + id;
      msg += ";";
    }
    if (!extra.empty()) {
      msg += " solutions-only:";
      for (const std::string& id : extra) msg += " " + id;
    }
    throw std::runtime_error(msg);
  }
  return matched;
}

int cmd_synth(const std::string& train_out, const std::string& test_out,
              const SynthSpec& spec) {
  SynthData data = generate_synthetic(spec);

  std::vector<ScoreVector> train;
  std::vector<int> train_labels;
  for (const ScoreVector& x : data.bank.positives()) {
    train.push_back(x);
    train_labels.push_back(1);
  }
  for (const ScoreVector& x : data.bank.negatives()) {
    train.push_back(x);
    train_labels.push_back(0);
  }
  io::write_score_table(train_out, train, &train_labels);

  std::vector<ScoreVector> test;
  std::vector<int> test_labels;
  for (const LabeledInstance& li : data.test) {
    test.push_back(li.scores);
    test_labels.push_back(li.label);
  }
  io::write_score_table(test_out, test, &test_labels);

  std::map<std::string, std::string> p{
      {"m", std::to_string(spec.m)},
      {"n_train_pos", std::to_string(spec.n_train_pos)},
      {"n_train_neg", std::to_string(spec.n_train_neg)},
      {"n_test", std::to_string(spec.n_test)},
      {"pos_mean", join_doubles(spec.pos_mean)},
      {"neg_mean", join_doubles(spec.neg_mean)},
      {"pos_std", join_doubles(spec.pos_std)},
      {"neg_std", join_doubles(spec.neg_std)},
      {"test_pos_fraction", io::format_double(spec.test_pos_fraction)},
      {"seed", std::to_string(spec.seed)}};
  emit_manifest(train_out, "synth", p, {}, {train_out, test_out});
  std::cout << "wrote " << train.size() << " train rows to " << train_out << " and "
            << test.size() << " test rows to " << test_out << "\n";
  return 0;
}

int cmd_learn(const std::string& train_path, const std::string& test_path,
              const OptimizerFlags& flags, const std::string& out) {
  const TrainingBank bank =
      build_bank(io::read_score_table(train_path).to_labeled());
  const io::ScoreTable test = io::read_score_table(test_path);
  if (test.m != bank.dim()) {
    throw std::runtime_error("test table has m = " + std::to_string(test.m) +
                             " but train has m = " + std::to_string(bank.dim()));
  }

  std::vector<LearnOutcome> outcomes =
      learn_batch(test.scores, bank, flags.to_config(), flags.threads);
  std::vector<ClaritySolution> solutions;
  solutions.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok()) {
      throw std::runtime_error("instance '" + test.scores[i].instance_id +
                               "': " + outcomes[i].error);
    }
    solutions.push_back(std::move(*outcomes[i].solution));
  }
  io::write_solutions(out, test.scores, solutions);

  std::map<std::string, std::string> p;
  flags.record(p);
  emit_manifest(out, "learn", p, {train_path, test_path}, {out});
  std::cout << "learned weights for " << solutions.size() << " instances -> " << out
            << "\n";
  return 0;
}

int cmd_rank(const std::string& solutions_path, const std::string& test_path,
             const std::string& criterion_name, std::size_t n_best,
             const std::string& out) {
  const RankCriterion criterion = rank_criterion_from_string(criterion_name);
  const io::ScoreTable test = io::read_score_table(test_path);

  RankedList list;
  std::vector<std::string> inputs{test_path};
  if (criterion == RankCriterion::Average) {
    list = rank_by_average(test.scores);
  } else {
    if (solutions_path.empty()) {
      throw std::runtime_error("criterion '" + criterion_name +
                               "' needs --solutions");
    }
    inputs.insert(inputs.begin(), solutions_path);
    const std::vector<ClaritySolution> solutions =
        match_solutions(io::read_solutions(solutions_path), test.scores);
    switch (criterion) {
      case RankCriterion::WeightedScore:
        list = rank_by_weighted_score(test.scores, solutions);
        break;
      case RankCriterion::RawClarity:
        list = rank_by_raw_clarity(test.scores, solutions);
        break;
      case RankCriterion::NBestAverage:
        list = rank_by_nbest(test.scores, solutions, n_best, false);
        break;
      case RankCriterion::NBestWeighted:
        list = rank_by_nbest(test.scores, solutions, n_best, true);
        break;
      default:
        break;
    }
  }
  io::write_ranking(out, list);

  std::map<std::string, std::string> p{{"criterion", criterion_name}};
  if (criterion == RankCriterion::NBestAverage ||
      criterion == RankCriterion::NBestWeighted) {
    p["n_best"] = std::to_string(n_best);
  }
  emit_manifest(out, "rank", p, inputs, {out});
  std::cout << "ranked " << list.entries.size() << " instances by " << criterion_name
            << " -> " << out << "\n";
  return 0;
}

int cmd_eval(const std::vector<std::string>& ranking_paths,
             const std::string& labels_path, const std::string& out) {
  const io::LabelTable labels = io::read_labels(labels_path);
  if (ranking_paths.size() != labels.columns.size()) {
    throw std::runtime_error(std::to_string(ranking_paths.size()) +
                             " ranking files vs " +
                             std::to_string(labels.columns.size()) +
                             " label columns");
  }

  std::ostringstream report;
  std::vector<double> aps;
  for (std::size_t c = 0; c < ranking_paths.size(); ++c) {
    std::map<std::string, int> by_id;
    for (std::size_t r = 0; r < labels.ids.size(); ++r) {
      by_id[labels.ids[r]] = labels.columns[c][r];
    }
    std::vector<int> ranked_labels;
    std::vector<std::string> unlabeled;
    for (const io::RankingRow& row : io::read_ranking(ranking_paths[c])) {
      auto it = by_id.find(row.instance_id);
      if (it == by_id.end()) {
        unlabeled.push_back(row.instance_id);
      } else {
        ranked_labels.push_back(it->second);
      }
    }
    if (!unlabeled.empty()) {
      std::string msg = "no label for ranked ids:";
      for (const std::string& id : unlabeled) msg += " " + id;
      throw std::runtime_error(msg);
    }
    const double ap = average_precision(ranked_labels);
    aps.push_back(ap);
    if (ranking_paths.size() == 1) {
      report << "AP " << io::format_double(ap) << "\n";
    } else {
      report << "AP[class" << c << "] " << io::format_double(ap) << "\n";
    }
  }
  if (aps.size() > 1) {
    report << "MAP " << io::format_double(mean_average_precision(aps)) << "\n";
  }

  std::cout << report.str();
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot open '" + out + "' for writing");
    }
    f << report.str();
    std::vector<std::string> inputs = ranking_paths;
    inputs.push_back(labels_path);
    emit_manifest(out, "eval", {}, inputs, {out});
  }
  return 0;
}

int cmd_corrupt(const std::string& in_path, const CorruptionSpec& spec,
                const std::string& out) {
  const io::ScoreTable table = io::read_score_table(in_path);
  const std::vector<ScoreVector> corrupted = corrupt_scores(table.scores, spec);
  io::write_score_table(out, corrupted, table.has_labels ? &table.labels : nullptr);

  std::map<std::string, std::string> p{
      {"classifiers", join_sizes(spec.classifier_indices)},
      {"fraction", io::format_double(spec.fraction)},
      {"sigma", io::format_double(spec.sigma)},
      {"seed", std::to_string(spec.seed)}};
  emit_manifest(out, "corrupt", p, {in_path}, {out});
  std::cout << "corrupted " << spec.classifier_indices.size() << " classifier(s) -> "
            << out << "\n";
  return 0;
}

int cmd_alpha(const std::string& train_path, const std::string& validation_path,
              const std::vector<double>& grid, const std::string& criterion_name,
              const OptimizerFlags& flags, const std::string& out) {
  const TrainingBank bank =
      build_bank(io::read_score_table(train_path).to_labeled());
  const std::vector<LabeledInstance> validation =
      io::read_score_table(validation_path).to_labeled();
  const RankCriterion criterion = rank_criterion_from_string(criterion_name);

  const AlphaSelection sel =
      select_alpha(grid, validation, bank, flags.to_config(), criterion,
                   flags.threads);

  std::ostringstream report;
  report << "alpha        AP\n";
  for (const auto& [a, ap] : sel.table) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-12s %s\n", io::format_double(a).c_str(),
                  io::format_double(ap).c_str());
    report << buf;
  }
  report << "selected " << io::format_double(sel.alpha) << " (AP "
         << io::format_double(sel.ap) << ")\n";
  std::cout << report.str();

  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot open '" + out + "' for writing");
    }
    f << report.str();
    std::map<std::string, std::string> p{{"alpha_grid", join_doubles(grid)},
                                         {"criterion", criterion_name}};
    flags.record(p, false);
    emit_manifest(out, "alpha", p, {train_path, validation_path}, {out});
  }
  return 0;
}

int cmd_experiment(const std::string& train_path, const std::string& test_path,
                   const std::string& validation_path,
                   const std::vector<double>& grid,
                   const std::string& alpha_criterion_name, bool alpha_fixed,
                   OptimizerFlags flags, const CorruptionSpec& corruption,
                   bool corrupt_enabled, const std::string& out,
                   const std::string& solutions_out) {
  const TrainingBank bank =
      build_bank(io::read_score_table(train_path).to_labeled());
  std::vector<LabeledInstance> test = io::read_score_table(test_path).to_labeled();

  std::ostringstream report;
  report << "clarityfuse experiment\n";
  report << "train: " << train_path << "\n";
  report << "test: " << test_path << "\n";

  if (corrupt_enabled) {
    std::vector<ScoreVector> scores;
    scores.reserve(test.size());
    for (const LabeledInstance& li : test) {
      scores.push_back(li.scores);
    }
    scores = corrupt_scores(scores, corruption);
    for (std::size_t i = 0; i < test.size(); ++i) {
      test[i].scores = std::move(scores[i]);
    }
    report << "corruption: classifiers [" << join_sizes(corruption.classifier_indices)
           << "], fraction " << io::format_double(corruption.fraction) << ", sigma "
           << io::format_double(corruption.sigma) << ", seed " << corruption.seed
           << "\n";
  }

  if (!alpha_fixed) {
    std::vector<LabeledInstance> validation =
        io::read_score_table(validation_path).to_labeled();
    if (corrupt_enabled) {
      // validation gets the same treatment as test so the selected alpha
      // reflects the corrupted conditions
      std::vector<ScoreVector> vscores;
      vscores.reserve(validation.size());
      for (const LabeledInstance& li : validation) {
        vscores.push_back(li.scores);
      }
      CorruptionSpec vspec = corruption;
      vspec.seed = corruption.seed + 1;
      vscores = corrupt_scores(vscores, vspec);
      for (std::size_t i = 0; i < validation.size(); ++i) {
        validation[i].scores = std::move(vscores[i]);
      }
    }
    const AlphaSelection sel = select_alpha(
        grid, validation, bank, flags.to_config(),
        rank_criterion_from_string(alpha_criterion_name), flags.threads);
    flags.alpha = sel.alpha;
    report << "alpha: " << io::format_double(sel.alpha)
           << " (selected on validation, AP " << io::format_double(sel.ap) << ")\n";
  } else {
    report << "alpha: " << io::format_double(flags.alpha) << " (fixed)\n";
  }
  report << "eta: " << io::format_double(flags.eta)
         << "  tol: " << io::format_double(flags.tol)
         << "  max-iters: " << flags.max_iters << "\n\n";

  std::vector<ScoreVector> scores;
  scores.reserve(test.size());
  for (const LabeledInstance& li : test) {
    scores.push_back(li.scores);
  }
  std::vector<LearnOutcome> outcomes =
      learn_batch(scores, bank, flags.to_config(), flags.threads);
  std::vector<ClaritySolution> solutions;
  solutions.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok()) {
      throw std::runtime_error("instance '" + scores[i].instance_id +
                               "': " + outcomes[i].error);
    }
    solutions.push_back(std::move(*outcomes[i].solution));
  }

  std::vector<ExperimentMode> modes{ExperimentMode::average(),
                                    ExperimentMode::weighted_score(),
                                    ExperimentMode::raw_clarity()};
  for (std::size_t n = 1; n <= bank.dim(); ++n) {
    modes.push_back(ExperimentMode::nbest_average(n));
  }
  for (std::size_t n = 1; n <= bank.dim(); ++n) {
    modes.push_back(ExperimentMode::nbest_weighted(n));
  }

  report << "mode                     AP\n";
  for (const ExperimentMode& mode : modes) {
    const ExperimentReport r = rank_and_score(
        test, mode.kind == ExperimentMode::Kind::Average
                  ? std::span<const ClaritySolution>{}
                  : std::span<const ClaritySolution>(solutions),
        mode);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%-24s %s\n", mode.name().c_str(),
                  io::format_double(r.ap).c_str());
    report << buf;
  }

  std::cout << report.str();
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open '" + out + "' for writing");
  }
  f << report.str();

  std::vector<std::string> outputs{out};
  if (!solutions_out.empty()) {
    io::write_solutions(solutions_out, scores, solutions);
    outputs.push_back(solutions_out);
  }

  std::map<std::string, std::string> p;
  flags.record(p);
  p["seed"] = std::to_string(corruption.seed);
  if (corrupt_enabled) {
    p["classifiers"] = join_sizes(corruption.classifier_indices);
    p["fraction"] = io::format_double(corruption.fraction);
    p["sigma"] = io::format_double(corruption.sigma);
  }
  if (!alpha_fixed) {
    p["alpha_grid"] = join_doubles(grid);
    p["alpha_criterion"] = alpha_criterion_name;
  }
  std::vector<std::string> inputs{train_path, test_path};
  if (!validation_path.empty()) {
    inputs.push_back(validation_path);
  }
  emit_manifest(out, "experiment", p, inputs, outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instance-specific classifier fusion by clarity optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // synth
  SynthSpec synth_spec;
  std::string synth_train_out;
  std::string synth_test_out;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--m", synth_spec.m, "Number of classifiers")
      ->check(CLI::Range(std::size_t{1}, std::size_t{10000}))
      ->capture_default_str();
  synth->add_option("--n-train-pos", synth_spec.n_train_pos)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--n-train-neg", synth_spec.n_train_neg)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--n-test", synth_spec.n_test)->capture_default_str();
  synth->add_option("--pos-mean", synth_spec.pos_mean, "1 or m values")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--neg-mean", synth_spec.neg_mean, "1 or m values")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--pos-std", synth_spec.pos_std, "1 or m values")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--neg-std", synth_spec.neg_std, "1 or m values")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--test-pos-fraction", synth_spec.test_pos_fraction)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth->add_option("--train-out", synth_train_out, "Training table path")
      ->required();
  synth->add_option("--test-out", synth_test_out, "Test table path")->required();

  // learn
  std::string learn_train, learn_test, learn_out;
  OptimizerFlags learn_flags;
  CLI::App* learn =
      app.add_subcommand("learn", "Learn per-instance fusion weights");
  learn->add_option("--train", learn_train, "Labeled training score table")
      ->required();
  learn->add_option("--test", learn_test, "Test score table")->required();
  learn_flags.attach(learn);
  learn->add_option("--out", learn_out, "Solutions file path")->required();

  // rank
  std::string rank_solutions, rank_test, rank_criterion = "weighted", rank_out;
  std::size_t rank_n_best = 0;  // 0: not set
  CLI::App* rank = app.add_subcommand("rank", "Rank test instances");
  rank->add_option("--solutions", rank_solutions,
                   "Solutions file (not needed for --criterion average)");
  rank->add_option("--test", rank_test, "Test score table")->required();
  rank->add_option("--criterion", rank_criterion,
                   "average|weighted|raw-clarity|nbest-avg|nbest-weighted")
      ->check(CLI::IsMember(
          {"average", "weighted", "raw-clarity", "nbest-avg", "nbest-weighted"}))
      ->capture_default_str();
  rank->add_option("--n-best", rank_n_best, "N for the nbest criteria")
      ->check(CLI::Range(std::size_t{1}, std::size_t{10000}));
  rank->add_option("--out", rank_out, "Ranking file path")->required();

  // eval
  std::vector<std::string> eval_rankings;
  std::string eval_labels, eval_out;
  CLI::App* eval = app.add_subcommand("eval", "Score rankings with AP / MAP");
  eval->add_option("--ranking", eval_rankings, "Ranking file(s), one per class")
      ->required();
  eval->add_option("--labels", eval_labels, "Ground-truth labels file")->required();
  eval->add_option("--out", eval_out, "Optional report file");

  // corrupt
  std::string corrupt_in, corrupt_out;
  CorruptionSpec corrupt_spec;
  CLI::App* corrupt =
      app.add_subcommand("corrupt", "Add Gaussian noise to classifier columns");
  corrupt->add_option("--in", corrupt_in, "Input score table")->required();
  corrupt->add_option("--classifiers", corrupt_spec.classifier_indices,
                      "Classifier columns to corrupt, e.g. 0,2")
      ->delimiter(',')
      ->required();
  corrupt->add_option("--fraction", corrupt_spec.fraction,
                      "Share of test points corrupted per classifier")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  corrupt->add_option("--sigma", corrupt_spec.sigma, "Noise stddev")
      ->check(CLI::NonNegativeNumber)
      ->required();
  corrupt->add_option("--seed", corrupt_spec.seed)->capture_default_str();
  corrupt->add_option("--out", corrupt_out, "Corrupted table path")->required();

  // alpha
  std::string alpha_train, alpha_validation, alpha_criterion = "weighted",
              alpha_out;
  std::vector<double> alpha_grid{1, 2, 5, 10, 20, 50, 100};
  OptimizerFlags alpha_flags;
  CLI::App* alpha =
      app.add_subcommand("alpha", "Select sigmoid sharpness on a validation set");
  alpha->add_option("--train", alpha_train, "Labeled training score table")
      ->required();
  alpha->add_option("--validation", alpha_validation, "Labeled validation table")
      ->required();
  alpha->add_option("--alpha-grid", alpha_grid, "Candidate alphas")
      ->delimiter(',')
      ->capture_default_str();
  alpha->add_option("--criterion", alpha_criterion, "weighted|raw-clarity")
      ->check(CLI::IsMember({"weighted", "raw-clarity"}))
      ->capture_default_str();
  alpha_flags.attach(alpha, /*with_alpha=*/false);
  alpha->add_option("--out", alpha_out, "Optional report file");

  // experiment
  std::string exp_train, exp_test, exp_validation, exp_out, exp_solutions_out;
  std::string exp_alpha_criterion = "weighted";
  std::vector<double> exp_grid{1, 2, 5, 10, 20, 50, 100};
  OptimizerFlags exp_flags;
  CorruptionSpec exp_corruption;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run every fusion mode and tabulate APs");
  experiment->add_option("--train", exp_train, "Labeled training score table")
      ->required();
  experiment->add_option("--test", exp_test, "Labeled test score table")
      ->required();
  experiment->add_option("--validation", exp_validation,
                         "Labeled validation table (enables alpha selection)");
  experiment->add_option("--alpha-grid", exp_grid, "Candidate alphas")
      ->delimiter(',')
      ->capture_default_str();
  experiment
      ->add_option("--alpha-criterion", exp_alpha_criterion,
                   "Criterion for alpha selection: weighted|raw-clarity")
      ->check(CLI::IsMember({"weighted", "raw-clarity"}))
      ->capture_default_str();
  exp_flags.attach(experiment);
  experiment->add_option("--classifiers", exp_corruption.classifier_indices,
                         "Classifier columns to corrupt before learning")
      ->delimiter(',');
  experiment->add_option("--fraction", exp_corruption.fraction)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  experiment->add_option("--sigma", exp_corruption.sigma)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  experiment->add_option("--seed", exp_corruption.seed)->capture_default_str();
  experiment->add_option("--out", exp_out, "Report file path")->required();
  experiment->add_option("--solutions-out", exp_solutions_out,
                         "Optional solutions file for the learned weights");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth->parsed()) {
      return cmd_synth(synth_train_out, synth_test_out, synth_spec);
    }
    if (learn->parsed()) {
      return cmd_learn(learn_train, learn_test, learn_flags, learn_out);
    }
    if (rank->parsed()) {
      if ((rank_criterion == "nbest-avg" || rank_criterion == "nbest-weighted") &&
          rank_n_best == 0) {
        std::cerr << "error: --n-best is required for criterion '" << rank_criterion
                  << "'\n";
        return 2;
      }
      return cmd_rank(rank_solutions, rank_test, rank_criterion, rank_n_best,
                      rank_out);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_rankings, eval_labels, eval_out);
    }
    if (corrupt->parsed()) {
      return cmd_corrupt(corrupt_in, corrupt_spec, corrupt_out);
    }
    if (alpha->parsed()) {
      return cmd_alpha(alpha_train, alpha_validation, alpha_grid, alpha_criterion,
                       alpha_flags, alpha_out);
    }
    if (experiment->parsed()) {
      const bool corrupt_enabled = !exp_corruption.classifier_indices.empty();
      const bool alpha_fixed = exp_validation.empty();
      return cmd_experiment(exp_train, exp_test, exp_validation, exp_grid,
                            exp_alpha_criterion, alpha_fixed, exp_flags,
                            exp_corruption, corrupt_enabled, exp_out,
                            exp_solutions_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
