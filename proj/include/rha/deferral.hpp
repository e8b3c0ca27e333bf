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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rha/dataset.hpp"
#include "rha/random.hpp"
#include "rha/selectors.hpp"

namespace rha {

enum class Route { kMachine, kHuman };

struct Assignment {
  Route route = Route::kMachine;
  std::size_t nn_index = 0;
  double prediction = 0.0;  // machine route only
};

struct EvalReport {
  std::size_t n_test = 0;
  std::size_t n_deferred = 0;
  double deferral_rate = 0.0;
  double machine_mse = 0.0;      // over machine-routed samples, 0 if none
  double human_cost_mean = 0.0;  // over deferred samples, 0 if none
  double overall_mse = 0.0;
};

// Brute-force Euclidean nearest neighbor; smallest index on exact ties.
std::size_t nearest_neighbor(std::span<const double> x, const Dataset& train);

// Routes x to the human iff its nearest training sample was outsourced.
Assignment assign(std::span<const double> x, const Dataset& train, const Selection& sel);

struct EvalOptions {
  // Score deferred samples with a sampled human prediction
  // s = y + sqrt(c) z, z ~ N(0, 1), instead of the expected cost c.
  bool sample_human_predictions = false;
  std::uint64_t seed = 0;
};

// Deferred samples contribute their expected human cost c; machine samples
// contribute (y - x^T w)^2.
EvalReport evaluate(const Dataset& test, const Dataset& train, const Selection& sel,
                    const EvalOptions& opts = {});

using FeatureSampler = std::function<std::vector<double>(Rng&)>;
FeatureSampler uniform_sampler(std::size_t dim, double lo = -1.0, double hi = 1.0);
FeatureSampler gaussian_sampler(std::size_t dim);

struct RateCheck {
  double empirical = 0.0;
  double expected = 0.0;  // n / N
};

// Monte-Carlo deferral rate over i.i.d. draws from the sampler.
RateCheck deferral_rate_check(const Dataset& train, const Selection& sel,
                              const FeatureSampler& sampler, std::size_t trials,
                              std::uint64_t seed);

}  // namespace rha
