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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rha/dataset.hpp"
#include "rha/linalg.hpp"
#include "rha/objective.hpp"

namespace rha {

struct TraceStep {
  std::size_t step = 0;  // 1-based
  std::size_t chosen = 0;
  double marginal_gain = 0.0;
  double loss_after = 0.0;
};

struct Selection {
  IndexSet human_set;
  std::optional<linalg::Vector> weights;  // absent iff S = V
  double loss_value = 0.0;
  double neg_log_loss = 0.0;
  std::vector<TraceStep> trace;
};

enum class Algorithm { kGreedy, kDs, kTriage, kRandom, kExhaustive };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

inline constexpr std::size_t kExhaustiveCap = 20;

struct GreedyOptions {
  // Candidate scan workers; the result does not depend on this.
  unsigned threads = 1;
};

// Runs exactly n steps, each picking the largest marginal gain (smallest
// index on ties).
Selection greedy_select(const Dataset& ds, double lambda, std::size_t budget,
                        const GreedyOptions& opts = {});

// Global minimizer of the loss over |S| <= n; lexicographically smallest S on
// ties. Throws kTooLarge for N > 20.
Selection exhaustive_select(const Dataset& ds, double lambda, std::size_t budget);

// Full-data ridge fit, then outsources the n largest (residual^2 - c).
Selection triage_select(const Dataset& ds, double lambda, std::size_t budget);

// Modular-modular difference-of-submodular iteration started from S = {}.
Selection ds_select(const Dataset& ds, double lambda, std::size_t budget,
                    std::size_t max_iters = 50);

// Uniform random n-subset.
Selection random_select(const Dataset& ds, double lambda, std::size_t budget,
                        std::uint64_t seed);

// Finishes a selection for a given human set: weights, loss, and a trace
// replaying S in its stored order.
Selection make_selection(const Dataset& ds, double lambda, IndexSet human);

// greedy_val >= opt_val / (1 + 1/(1 - alpha)) - 1e-10. Throws kInvalidAlpha
// for alpha >= 1 or non-finite alpha.
bool approx_certificate(double greedy_val, double opt_val, double alpha);
double certificate_threshold(double opt_val, double alpha);

}  // namespace rha
