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

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rha/dataset.hpp"
#include "rha/linalg.hpp"

namespace rha {

// Sample indices outsourced to humans, in insertion order.
using IndexSet = std::vector<std::size_t>;

// Sufficient statistics of the machine set S^c = V \ S.
//   gram     = sum x_i x_i^T        moment = sum y_i x_i
//   yy       = sum y_i^2            cost_sum = sum_{i in S} c_i
struct MachineStats {
  linalg::SymMatrix gram;
  linalg::Vector moment;
  double yy = 0.0;
  double cost_sum = 0.0;
  std::size_t machine_count = 0;
};

// Batch evaluation from scratch. Throws kInvalidArgument on duplicate or
// out-of-range indices.
MachineStats machine_stats(const Dataset& ds, std::span<const std::size_t> human);

// Ridge system matrix lambda |S^c| I + X_{S^c} X_{S^c}^T.
linalg::SymMatrix ridge_matrix(const MachineStats& st, double lambda);

// w*(S); throws kEmptyMachineSet when S = V.
linalg::Vector ridge_weights(const Dataset& ds, std::span<const std::size_t> human,
                             double lambda);

// l(w*(S), S) with the S = V case split.
double loss(const Dataset& ds, std::span<const std::size_t> human, double lambda);

// log det of the (d+1)x(d+1) block matrix; the S = V case uses the extended
// definition. Throws kNotSpd if the block matrix is not positive definite.
double f_value(const Dataset& ds, std::span<const std::size_t> human, double lambda);
// log det(lambda |S^c| I + X X^T); for S = V, f(V) - ln sum c.
double g_value(const Dataset& ds, std::span<const std::size_t> human, double lambda);

struct FullSetValues {
  double f = 0.0;
  double g = 0.0;
};
// Extended f(V), g(V): minimum over pairs k1 != k2 of
//   f(V\k1) + f(V\k2) - f(V\{k1,k2})  and  g(V\k1) + g(V\k2) - g(V\{k1,k2}) + ln sum c.
// O(N^2) small factorizations. With sum c = 0, f(V) = -inf.
FullSetValues full_set_values(const Dataset& ds, double lambda);

// Incremental objective for a growing human set. Holds a pointer to the
// dataset, which must outlive every state derived from it.
class ObjectiveState {
 public:
  const Dataset& dataset() const { return *ds_; }
  double lambda() const { return lambda_; }
  const IndexSet& human_set() const { return human_; }
  bool is_human(std::size_t k) const { return mask_[k] != 0; }
  std::size_t machine_count() const { return stats_.machine_count; }
  const MachineStats& stats() const { return stats_; }
  // Factor of A(S) = lambda m I + G; present iff m >= 1.
  const std::optional<linalg::SpdFactor>& factor() const { return factor_; }

  double loss() const;
  double f() const;
  double g() const;

 private:
  friend ObjectiveState init_state(const Dataset& ds, double lambda);
  friend ObjectiveState with_human(const ObjectiveState& st, std::size_t k);

  const Dataset* ds_ = nullptr;
  double lambda_ = 0.0;
  IndexSet human_;
  std::vector<char> mask_;
  MachineStats stats_;
  std::optional<linalg::SpdFactor> factor_;
};

ObjectiveState init_state(const Dataset& ds, double lambda);
// State for S + {k}; throws kAlreadyHuman.
ObjectiveState with_human(const ObjectiveState& st, std::size_t k);

// Candidate evaluation for one greedy step: a single factorization of
// lambda (m-1) I + G, then each candidate costs O(d^2) through a
// Sherman-Morrison downdate with x_k. Falls back to refactoring
// A(S + k) when the downdate breaks down.
class GainScan {
 public:
  explicit GainScan(const ObjectiveState& st);

  // Loss of S + {k}.
  double loss_with(std::size_t k) const;
  // -ln l(S + k) + ln l(S). Throws kAlreadyHuman.
  double gain(std::size_t k) const;
  std::size_t fallback_count() const { return fallbacks_.load(); }

 private:
  const ObjectiveState* st_;
  double base_log_loss_;
  std::optional<linalg::SpdFactor> reduced_;  // lambda (m-1) I + G, m >= 2
  mutable std::atomic<std::size_t> fallbacks_{0};
};

double marginal_gain(const ObjectiveState& st, std::size_t k);

struct ConditionReport {
  double gamma_min = 0.0;
  double lambda_required = 0.0;
  double max_sq_norm = 0.0;
  double total_cost = 0.0;
  bool submodular_holds = false;
  bool strict_decrease_holds = false;
  bool scaling_holds = false;
  std::optional<double> alpha_star;
};

// Reports, never rejects.
ConditionReport check_conditions(const Dataset& ds, double lambda);

struct Rescaled {
  Dataset data;
  double scale = 1.0;
};
// y <- s y, c <- s^2 c with s = max(1, sqrt(1.000001 / sum c)).
Rescaled rescale_for_scaling(const Dataset& ds);

// Curvature bound of the log-loss objective. Requires the nonincreasing
// hypotheses and sum c >= 1; throws kHypothesisViolated otherwise.
double alpha_star(const Dataset& ds, double lambda);

// Squared error on sample k of a machine trained on k alone:
// y_k^2 (lambda / (lambda + |x_k|^2))^2.
double single_sample_machine_error(const Dataset& ds, std::size_t k, double lambda);

}  // namespace rha
