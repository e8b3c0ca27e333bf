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

#include "rha/deferral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rha/error.hpp"

namespace rha {

namespace {

std::vector<char> membership(const Dataset& train, const Selection& sel) {
  std::vector<char> in_s(train.size(), 0);
  for (std::size_t k : sel.human_set) {
    if (k >= train.size()) {
      throw Error(ErrorCode::kInvalidArgument, "selection refers to sample " +
                                                   std::to_string(k) + " outside the train set");
    }
    in_s[k] = 1;
  }
  return in_s;
}

Assignment route(std::span<const double> x, const Dataset& train, const Selection& sel,
                 const std::vector<char>& in_s) {
  Assignment a;
  a.nn_index = nearest_neighbor(x, train);
  if (in_s[a.nn_index]) {
    a.route = Route::kHuman;
    return a;
  }
  if (!sel.weights) {
    throw Error(ErrorCode::kNoWeights, "machine route without fitted weights");
  }
  a.route = Route::kMachine;
  a.prediction = linalg::dot(x, *sel.weights);
  return a;
}

}  // namespace

std::size_t nearest_neighbor(std::span<const double> x, const Dataset& train) {
  if (x.size() != train.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "query has dimension " + std::to_string(x.size()) +
                                                   ", train set has " +
                                                   std::to_string(train.dim()));
  }
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < train.size(); ++i) {
    auto xi = train.x(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      const double diff = xi[j] - x[j];
      d2 += diff * diff;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

Assignment assign(std::span<const double> x, const Dataset& train, const Selection& sel) {
  return route(x, train, sel, membership(train, sel));
}

EvalReport evaluate(const Dataset& test, const Dataset& train, const Selection& sel,
                    const EvalOptions& opts) {
  if (test.dim() != train.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "test and train feature dimensions differ");
  }
  const auto in_s = membership(train, sel);
  Rng rng(opts.seed);
  EvalReport r;
  r.n_test = test.size();
  double machine_sq = 0.0;
  double human_sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Assignment a = route(test.x(i), train, sel, in_s);
    if (a.route == Route::kHuman) {
      ++r.n_deferred;
      double err = test.cost(i);
      if (opts.sample_human_predictions) {
        const double z = rng.normal();
        err = test.cost(i) * z * z;
      }
      human_sum += err;
    } else {
      const double e = test.y(i) - a.prediction;
      machine_sq += e * e;
    }
  }
  const std::size_t n_machine = r.n_test - r.n_deferred;
  r.deferral_rate = static_cast<double>(r.n_deferred) / static_cast<double>(r.n_test);
  r.machine_mse = n_machine > 0 ? machine_sq / static_cast<double>(n_machine) : 0.0;
  r.human_cost_mean = r.n_deferred > 0 ? human_sum / static_cast<double>(r.n_deferred) : 0.0;
  r.overall_mse = (machine_sq + human_sum) / static_cast<double>(r.n_test);
  return r;
}

FeatureSampler uniform_sampler(std::size_t dim, double lo, double hi) {
  return [dim, lo, hi](Rng& rng) {
    std::vector<double> x(dim);
    for (double& v : x) v = rng.uniform(lo, hi);
    return x;
  };
}

FeatureSampler gaussian_sampler(std::size_t dim) {
  return [dim](Rng& rng) {
    std::vector<double> x(dim);
    for (double& v : x) v = rng.normal();
    return x;
  };
}

RateCheck deferral_rate_check(const Dataset& train, const Selection& sel,
                              const FeatureSampler& sampler, std::size_t trials,
                              std::uint64_t seed) {
  const auto in_s = membership(train, sel);
  Rng rng(seed);
  std::size_t deferred = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = sampler(rng);
    if (in_s[nearest_neighbor(x, train)]) ++deferred;
  }
  RateCheck r;
  r.empirical = trials > 0 ? static_cast<double>(deferred) / static_cast<double>(trials) : 0.0;
  r.expected = static_cast<double>(sel.human_set.size()) / static_cast<double>(train.size());
  return r;
}

}  // namespace rha
