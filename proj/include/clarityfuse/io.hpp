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

#ifndef CLARITYFUSE_IO_HPP_
#define CLARITYFUSE_IO_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "clarityfuse/ranking.hpp"
#include "clarityfuse/types.hpp"

namespace clarityfuse::io {

// Score tables are plain CSV with header `id,label,c0,...,c{m-1}`; the label
// column is optional (test files are usually unlabeled). Doubles are written
// with 17 significant digits so write-then-read round-trips exactly.

struct ScoreTable {
  std::vector<ScoreVector> scores;
  std::vector<int> labels;  // parallel to scores when has_labels
  bool has_labels = false;
  std::size_t m = 0;

  /// Throws unless the table carries labels.
  std::vector<LabeledInstance> to_labeled() const;
};

/// Parses a score table. Malformed rows raise std::runtime_error naming the
/// line number and the problem.
ScoreTable read_score_table(const std::string& path);

void write_score_table(const std::string& path, std::span<const ScoreVector> scores,
                       const std::vector<int>* labels = nullptr);

// Solutions files hold one learned-weights record per test instance:
// `id,rcl,direction,ascent_iters,descent_iters,alpha,degenerate,anomaly,w0,...`

struct SolutionRecord {
  std::string instance_id;
  ClaritySolution solution;
};

void write_solutions(const std::string& path, std::span<const ScoreVector> scores,
                     std::span<const ClaritySolution> solutions);
std::vector<SolutionRecord> read_solutions(const std::string& path);

// Ranking files: `rank,id,criterion,ranking_score`, rank starting at 1.

void write_ranking(const std::string& path, const RankedList& list);

struct RankingRow {
  std::size_t rank = 0;
  std::string instance_id;
  std::string criterion;
  double ranking_score = 0.0;
};

std::vector<RankingRow> read_ranking(const std::string& path);

/// Ground-truth labels, one column per class: header `id,label` for a single
/// class or `id,label0,...,label{k-1}` for several. A labeled score table
/// also qualifies (its score columns are ignored).
struct LabelTable {
  std::vector<std::string> ids;
  std::vector<std::vector<int>> columns;  // columns[class][row]
};

LabelTable read_labels(const std::string& path);

/// Every command writes `<out>.manifest.json` beside its outputs: the
/// command, all parameters, input-file digests and the tool version, enough
/// to re-derive the result. Contains no timestamps, so reruns are
/// byte-identical.
struct RunManifest {
  std::string command;
  std::string version;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> input_digests;   // path -> fnv1a64 hex
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

/// Shortest decimal that round-trips the double (17 significant digits).
std::string format_double(double v);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex chars.
std::string file_digest_hex(const std::string& path);

}  // namespace clarityfuse::io

#endif  // CLARITYFUSE_IO_HPP_
