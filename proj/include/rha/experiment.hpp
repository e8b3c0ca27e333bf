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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rha/datagen.hpp"
#include "rha/dataset.hpp"
#include "rha/objective.hpp"
#include "rha/selectors.hpp"

namespace rha::experiment {

// Exactly one of `synthetic` or `input` is set.
struct DataSource {
  std::optional<SyntheticConfig> synthetic;
  std::filesystem::path input;
  bool annotator_input = false;
};

struct ExperimentConfig {
  DataSource source;
  double lambda = 5e-3;
  std::vector<std::size_t> budgets;
  std::vector<Algorithm> algorithms{Algorithm::kGreedy};
  std::vector<std::uint64_t> seeds{0};
  double train_fraction = 0.8;
  std::optional<HumanErrorModel> human_model;
  std::filesystem::path output_dir;  // empty: nothing is written
  unsigned jobs = 1;
  bool timing = false;  // wall_ms stays 0 unless set, keeping reruns byte-identical
  bool audit = false;
  bool write_traces = true;
  bool sample_human_predictions = false;
  std::size_t ds_max_iters = 50;
};

struct ResultRow {
  Algorithm algorithm = Algorithm::kGreedy;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double lambda = 0.0;
  double train_loss = 0.0;
  double neg_log_loss = 0.0;
  double test_mse = 0.0;
  double machine_mse = 0.0;
  double human_cost_mean = 0.0;
  double deferral_rate = 0.0;
  double wall_ms = 0.0;
};

struct SweepCell {
  ResultRow row;
  Selection selection;
  std::string trace_csv;  // ids refer to this seed's training rows
};

// Per-seed data after loading or generation, human model and split.
struct SeedData {
  std::uint64_t seed = 0;
  Dataset train;
  Dataset test;
};

SeedData prepare_seed(const ExperimentConfig& cfg, std::uint64_t seed);

// Runs every (algorithm, seed, n) cell, possibly on a worker pool, and
// returns them in canonical order: algorithms, then seeds, then budgets, as
// listed in the config. Throws kBudgetTooLarge / kTooLarge before any work.
std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg);

// Writes results.csv (and traces/ unless disabled) under cfg.output_dir.
std::vector<SweepCell> sweep(const ExperimentConfig& cfg);

void write_results_csv(const std::vector<SweepCell>& cells, std::ostream& out);
std::string trace_file_name(Algorithm a, std::uint64_t seed, std::size_t n);

// Stream seed for the stochastic parts of one cell.
std::uint64_t cell_seed(std::uint64_t seed, Algorithm a, std::size_t n);

struct CertifyReport {
  ConditionReport conditions;
  bool applicable = false;
  std::string reason;  // why the bound does not apply
  IndexSet greedy_set;
  IndexSet optimal_set;
  double greedy_neg_log_loss = 0.0;
  double optimal_neg_log_loss = 0.0;
  // Objective normalized to zero at the empty set: ln l({}) - ln l(S).
  double greedy_gain = 0.0;
  double optimal_gain = 0.0;
  double alpha = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Greedy against the exhaustive optimum with the alpha* certificate.
// Throws kTooLarge for N > 20.
CertifyReport certify(const Dataset& ds, double lambda, std::size_t budget);

}  // namespace rha::experiment
