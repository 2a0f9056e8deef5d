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

#include "clarityfuse/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace clarityfuse::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void fail(const std::string& path, std::size_t line_no,
                       const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
}

double parse_double(const std::string& path, std::size_t line_no,
                    const std::string& field) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE) {
    fail(path, line_no, "cannot parse number '" + field + "'");
  }
  return v;
}

long parse_long(const std::string& path, std::size_t line_no,
                const std::string& field) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(field.c_str(), &end, 10);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE) {
    fail(path, line_no, "cannot parse integer '" + field + "'");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // \n line endings everywhere
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

void check_write(const std::ofstream& out, const std::string& path) {
  if (!out) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<LabeledInstance> ScoreTable::to_labeled() const {
  if (!has_labels) {
    throw std::runtime_error("score table is missing the 'label' column");
  }
  std::vector<LabeledInstance> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back({scores[i], labels[i]});
  }
  return out;
}

ScoreTable read_score_table(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file (expected a header row)");
  }
  const std::vector<std::string> header = split_csv(line);
  if (header.empty() || header[0] != "id") {
    fail(path, 1, "header must start with 'id'");
  }
  ScoreTable table;
  std::size_t first_score_col = 1;
  if (header.size() > 1 && header[1] == "label") {
    table.has_labels = true;
    first_score_col = 2;
  }
  if (header.size() <= first_score_col) {
    fail(path, 1, "no score columns (expected c0,...)");
  }
  table.m = header.size() - first_score_col;
  for (std::size_t j = 0; j < table.m; ++j) {
    const std::string expected = "c" + std::to_string(j);
    if (header[first_score_col + j] != expected) {
      fail(path, 1, "score column " + std::to_string(j) + " must be named '" +
                        expected + "', got '" + header[first_score_col + j] + "'");
    }
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size()) {
      fail(path, line_no,
           "expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    ScoreVector x;
    x.instance_id = fields[0];
    if (x.instance_id.empty()) {
      fail(path, line_no, "empty instance id");
    }
    if (table.has_labels) {
      const long label = parse_long(path, line_no, fields[1]);
      if (label != 0 && label != 1) {
        fail(path, line_no, "label must be 0 or 1, got " + fields[1]);
      }
      table.labels.push_back(static_cast<int>(label));
    }
    x.values.reserve(table.m);
    for (std::size_t j = 0; j < table.m; ++j) {
      const double v = parse_double(path, line_no, fields[first_score_col + j]);
      if (!std::isfinite(v)) {
        fail(path, line_no, "non-finite score in column c" + std::to_string(j));
      }
      x.values.push_back(v);
    }
    table.scores.push_back(std::move(x));
  }
  return table;
}

void write_score_table(const std::string& path, std::span<const ScoreVector> scores,
                       const std::vector<int>* labels) {
  if (labels && labels->size() != scores.size()) {
    throw std::invalid_argument("write_score_table: labels do not match scores");
  }
  const std::size_t m = scores.empty() ? 0 : scores.front().dim();
  std::ofstream out = open_out(path);
  out << "id";
  if (labels) {
    out << ",label";
  }
  for (std::size_t j = 0; j < m; ++j) {
    out << ",c" << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << scores[i].instance_id;
    if (labels) {
      out << "," << (*labels)[i];
    }
    for (double v : scores[i].values) {
      out << "," << format_double(v);
    }
    out << "\n";
  }
  check_write(out, path);
}

void write_solutions(const std::string& path, std::span<const ScoreVector> scores,
                     std::span<const ClaritySolution> solutions) {
  if (scores.size() != solutions.size()) {
    throw std::invalid_argument("write_solutions: scores do not match solutions");
  }
  const std::size_t m = solutions.empty() ? 0 : solutions.front().weights.dim();
  std::ofstream out = open_out(path);
  out << "id,rcl,direction,ascent_iters,descent_iters,alpha,degenerate,anomaly";
  for (std::size_t j = 0; j < m; ++j) {
    out << ",w" << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const ClaritySolution& s = solutions[i];
    out << scores[i].instance_id << "," << format_double(s.rcl) << ","
        << to_string(s.direction) << "," << s.ascent_iterations << ","
        << s.descent_iterations << "," << format_double(s.alpha) << ","
        << (s.degenerate_projection ? 1 : 0) << "," << (s.sign_anomaly ? 1 : 0);
    for (double w : s.weights.values()) {
      out << "," << format_double(w);
    }
    out << "\n";
  }
  check_write(out, path);
}

std::vector<SolutionRecord> read_solutions(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file (expected a header row)");
  }
  const std::vector<std::string> header = split_csv(line);
  constexpr std::size_t kFixed = 8;  // columns before the weights
  if (header.size() <= kFixed || header[0] != "id" || header[1] != "rcl") {
    fail(path, 1, "not a solutions file");
  }
  const std::size_t m = header.size() - kFixed;

  std::vector<SolutionRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != header.size()) {
      fail(path, line_no,
           "expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(f.size()));
    }
    std::vector<double> w(m);
    for (std::size_t j = 0; j < m; ++j) {
      w[j] = parse_double(path, line_no, f[kFixed + j]);
    }
    Direction dir;
    if (f[2] == "maximized") {
      dir = Direction::Maximized;
    } else if (f[2] == "minimized") {
      dir = Direction::Minimized;
    } else {
      fail(path, line_no, "direction must be maximized or minimized, got '" + f[2] + "'");
    }
    ClaritySolution sol{WeightVector(std::move(w)),
                        parse_double(path, line_no, f[1]),
                        dir,
                        static_cast<std::size_t>(parse_long(path, line_no, f[3])),
                        static_cast<std::size_t>(parse_long(path, line_no, f[4])),
                        parse_double(path, line_no, f[5]),
                        parse_long(path, line_no, f[6]) != 0,
                        parse_long(path, line_no, f[7]) != 0};
    records.push_back({f[0], std::move(sol)});
  }
  return records;
}

void write_ranking(const std::string& path, const RankedList& list) {
  std::ofstream out = open_out(path);
  out << "rank,id,criterion,ranking_score\n";
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    out << (i + 1) << "," << list.entries[i].instance_id << ","
        << to_string(list.criterion) << ","
        << format_double(list.entries[i].ranking_score) << "\n";
  }
  check_write(out, path);
}

std::vector<RankingRow> read_ranking(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file (expected a header row)");
  }
  if (split_csv(line) != std::vector<std::string>{"rank", "id", "criterion",
                                                  "ranking_score"}) {
    fail(path, 1, "not a ranking file");
  }
  std::vector<RankingRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 4) {
      fail(path, line_no, "expected 4 fields, got " + std::to_string(f.size()));
    }
    rows.push_back({static_cast<std::size_t>(parse_long(path, line_no, f[0])), f[1],
                    f[2], parse_double(path, line_no, f[3])});
  }
  return rows;
}

LabelTable read_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file (expected a header row)");
  }
  const std::vector<std::string> header = split_csv(line);
  if (header.empty() || header[0] != "id") {
    fail(path, 1, "header must start with 'id'");
  }
  std::size_t k = 0;
  if (header.size() > 1 && header[1] == "label") {
    k = 1;
  } else {
    while (1 + k < header.size() && header[1 + k] == "label" + std::to_string(k)) {
      ++k;
    }
  }
  if (k == 0) {
    fail(path, 1, "missing 'label' column");
  }

  LabelTable table;
  table.columns.resize(k);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != header.size()) {
      fail(path, line_no,
           "expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(f.size()));
    }
    table.ids.push_back(f[0]);
    for (std::size_t c = 0; c < k; ++c) {
      const long label = parse_long(path, line_no, f[1 + c]);
      if (label != 0 && label != 1) {
        fail(path, line_no, "label must be 0 or 1, got " + f[1 + c]);
      }
      table.columns[c].push_back(static_cast<int>(label));
    }
  }
  return table;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["parameters"] = manifest.parameters;
  j["inputs"] = manifest.input_digests;
  j["outputs"] = manifest.outputs;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  check_write(out, path);
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "' for digesting");
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace clarityfuse::io
