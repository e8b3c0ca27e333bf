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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rha/dataset.hpp"

namespace rha {

enum class Response { kGaussian, kLogistic };

std::string_view response_name(Response r);
std::optional<Response> parse_response(std::string_view name);

struct SyntheticConfig {
  std::size_t dim = 5;
  std::size_t n_samples = 500;
  Response response = Response::kGaussian;
  double sigma1 = 0.1;   // response noise, gaussian only
  double sigma2 = 1e-3;  // human error scale
  std::uint64_t seed = 0;
};

// x ~ U(-1, 1)^d; y = 1^T x / d + N(0, sigma1^2) or sigmoid(1^T x / d);
// c = |N(0, sigma2^2)|. Features, noise and costs use separate sub-seeded
// streams ("features", "response", "costs").
Dataset gen_synthetic(const SyntheticConfig& cfg);

struct CategoricalOutcome {
  std::vector<double> probabilities;  // probabilities[k - 1] = P(s = k)
  double cost = 0.0;                  // E (y - s)^2
};

// Human score model on a t point scale: the true score with probability p,
// the neighbouring scores share 1 - p (all of it at the ends of the scale).
// Throws kInvalidScore unless 1 <= y <= t, t >= 2 and 0 <= p <= 1.
CategoricalOutcome categorical_cost(int y, int t, double p);

// Expected squared error of a uniformly picked annotator score.
// Throws kEmptyScores.
double annotator_cost(double y_mean, std::span<const double> scores);
double mean_score(std::span<const double> scores);

// round(rho_c N) samples, chosen uniformly, get c_low; the rest c_high.
std::vector<double> bimodal_costs(std::size_t n, double rho_c, std::uint64_t seed,
                                  double c_low = 1e-4, double c_high = 0.5);

struct GaussianHumans {
  double sigma2 = 1e-3;
};
struct CategoricalHumans {
  int scale_points = 5;
  double p = 0.9;
};
struct AnnotatorHumans {
  std::vector<std::vector<double>> scores;  // one list per sample
};
struct BimodalHumans {
  double rho_c = 0.5;
  double c_low = 1e-4;
  double c_high = 0.5;
};
using HumanErrorModel =
    std::variant<GaussianHumans, CategoricalHumans, AnnotatorHumans, BimodalHumans>;

// Replaces the costs (and, for annotators, the responses) of a dataset.
// The categorical model requires integer responses in [1, t].
Dataset apply_human_model(const Dataset& ds, const HumanErrorModel& model, std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset test;
};

// Seeded uniform permutation; train gets round(fraction N) rows. Both parts
// keep the original row order. Throws kTooSmall unless train >= 2, test >= 1.
Split split(const Dataset& ds, double train_fraction, std::uint64_t seed);

}  // namespace rha
