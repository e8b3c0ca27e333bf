/*
 * Copyright 2026 The RHA Authors.
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

#include "rha/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "rha/datagen.hpp"
#include "rha/error.hpp"

namespace rha::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

double parse_real(std::string_view cell, std::size_t line_no, std::string_view column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    parse_error(line_no, "column '" + std::string(column) + "': cannot parse '" +
                             std::string(cell) + "' as a number");
  }
  if (!std::isfinite(v)) {
    parse_error(line_no, "column '" + std::string(column) + "' is not finite");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

// Counts the leading f0, f1, ... columns after `id`.
std::size_t feature_columns(const std::vector<std::string_view>& header) {
  if (header.empty() || header[0] != "id") parse_error(1, "first column must be 'id'");
  std::size_t d = 0;
  while (1 + d < header.size() && header[1 + d] == "f" + std::to_string(d)) ++d;
  if (d == 0) parse_error(1, "expected feature columns f0, f1, ...");
  return d;
}

bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error(1, "missing header");
  const auto header = split_cells(line);
  const std::size_t d = feature_columns(header);
  if (header.size() != d + 3 || header[d + 1] != "y" || header[d + 2] != "c") {
    parse_error(1, "header must be id,f0,...,f" + std::to_string(d - 1) + ",y,c");
  }
  std::vector<double> features, y, c;
  std::vector<std::string> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_cells(line);
    if (cells.size() != d + 3) {
      parse_error(line_no, "expected " + std::to_string(d + 3) + " cells, found " +
                               std::to_string(cells.size()));
    }
    if (cells[0].empty()) parse_error(line_no, "empty id");
    ids.emplace_back(cells[0]);
    for (std::size_t j = 0; j < d; ++j) {
      features.push_back(parse_real(cells[1 + j], line_no, header[1 + j]));
    }
    y.push_back(parse_real(cells[d + 1], line_no, "y"));
    const double cost = parse_real(cells[d + 2], line_no, "c");
    if (cost < 0.0) parse_error(line_no, "human cost c must be nonnegative");
    c.push_back(cost);
  }
  if (y.empty()) parse_error(line_no, "no data rows");
  return Dataset(d, std::move(features), std::move(y), std::move(c), std::move(ids));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_dataset_csv(in);
}

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  out << "id";
  for (std::size_t j = 0; j < ds.dim(); ++j) out << ",f" << j;
  out << ",y,c\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.id(i);
    for (double v : ds.x(i)) out << ',' << format_real(v);
    out << ',' << format_real(ds.y(i)) << ',' << format_real(ds.cost(i)) << '\n';
  }
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_dataset_csv(ds, out);
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

AnnotatedDataset read_annotator_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error(1, "missing header");
  const auto header = split_cells(line);
  const std::size_t d = feature_columns(header);
  const std::size_t n_scores = header.size() - 1 - d;
  if (n_scores == 0) parse_error(1, "expected score columns s0, s1, ...");
  for (std::size_t j = 0; j < n_scores; ++j) {
    if (header[1 + d + j] != "s" + std::to_string(j)) {
      parse_error(1, "expected column s" + std::to_string(j) + ", found '" +
                         std::string(header[1 + d + j]) + "'");
    }
  }
  std::vector<double> features;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> scores;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_cells(line);
    if (cells.size() < d + 2 || cells.size() > header.size()) {
      parse_error(line_no, "expected between " + std::to_string(d + 2) + " and " +
                               std::to_string(header.size()) + " cells, found " +
                               std::to_string(cells.size()));
    }
    if (cells[0].empty()) parse_error(line_no, "empty id");
    ids.emplace_back(cells[0]);
    for (std::size_t j = 0; j < d; ++j) {
      features.push_back(parse_real(cells[1 + j], line_no, header[1 + j]));
    }
    std::vector<double> row;
    for (std::size_t j = 1 + d; j < cells.size(); ++j) {
      if (cells[j].empty()) continue;
      row.push_back(parse_real(cells[j], line_no, header[j]));
    }
    if (row.empty()) parse_error(line_no, "sample has no annotator scores");
    scores.push_back(std::move(row));
  }
  if (scores.empty()) parse_error(line_no, "no data rows");
  std::vector<double> y(scores.size()), c(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    y[i] = mean_score(scores[i]);
    c[i] = annotator_cost(y[i], scores[i]);
  }
  return {Dataset(d, std::move(features), std::move(y), std::move(c), std::move(ids)),
          std::move(scores)};
}

AnnotatedDataset read_annotator_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_annotator_csv(in);
}

void write_trace_csv(const Selection& sel, const Dataset& train, std::ostream& out) {
  out << "step,chosen_id,marginal_gain,loss_after\n";
  for (const auto& t : sel.trace) {
    out << t.step << ',' << train.id(t.chosen) << ',' << format_real(t.marginal_gain) << ','
        << format_real(t.loss_after) << '\n';
  }
}

}  // namespace rha::io
