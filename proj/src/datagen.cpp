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

#include "rha/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rha/error.hpp"
#include "rha/random.hpp"

namespace rha {

std::string_view response_name(Response r) {
  return r == Response::kGaussian ? "gaussian" : "logistic";
}

std::optional<Response> parse_response(std::string_view name) {
  if (name == "gaussian") return Response::kGaussian;
  if (name == "logistic") return Response::kLogistic;
  return std::nullopt;
}

Dataset gen_synthetic(const SyntheticConfig& cfg) {
  if (cfg.dim < 1 || cfg.n_samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic data needs d >= 1 and N >= 2");
  }
  if (!(cfg.sigma1 >= 0.0) || !(cfg.sigma2 >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma1 and sigma2 must be nonnegative");
  }
  Rng feature_rng(derive_seed(cfg.seed, "features"));
  Rng noise_rng(derive_seed(cfg.seed, "response"));
  Rng cost_rng(derive_seed(cfg.seed, "costs"));

  const std::size_t n = cfg.n_samples;
  const std::size_t d = cfg.dim;
  std::vector<double> features(n * d);
  std::vector<double> y(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = feature_rng.uniform(-1.0, 1.0);
      features[i * d + j] = v;
      mean += v;
    }
    mean /= static_cast<double>(d);
    if (cfg.response == Response::kGaussian) {
      y[i] = mean + cfg.sigma1 * noise_rng.normal();
    } else {
      y[i] = 1.0 / (1.0 + std::exp(-mean));
    }
    c[i] = std::abs(cfg.sigma2 * cost_rng.normal());
  }
  return Dataset(d, std::move(features), std::move(y), std::move(c));
}

CategoricalOutcome categorical_cost(int y, int t, double p) {
  if (t < 2 || y < 1 || y > t || !(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidScore, "score " + std::to_string(y) + " on a " +
                                              std::to_string(t) + " point scale with p = " +
                                              std::to_string(p));
  }
  CategoricalOutcome out;
  out.probabilities.assign(static_cast<std::size_t>(t), 0.0);
  auto at = [&](int k) -> double& { return out.probabilities[static_cast<std::size_t>(k - 1)]; };
  at(y) = p;
  if (y == 1) {
    at(2) += 1.0 - p;
  } else if (y == t) {
    at(t - 1) += 1.0 - p;
  } else {
    at(y - 1) += (1.0 - p) / 2.0;
    at(y + 1) += (1.0 - p) / 2.0;
  }
  for (int k = 1; k <= t; ++k) {
    const double diff = static_cast<double>(y - k);
    out.cost += at(k) * diff * diff;
  }
  return out;
}

double mean_score(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no annotator scores");
  double s = 0.0;
  for (double v : scores) s += v;
  return s / static_cast<double>(scores.size());
}

double annotator_cost(double y_mean, std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no annotator scores");
  double s = 0.0;
  for (double v : scores) s += (y_mean - v) * (y_mean - v);
  return s / static_cast<double>(scores.size());
}

std::vector<double> bimodal_costs(std::size_t n, double rho_c, std::uint64_t seed, double c_low,
                                  double c_high) {
  if (!(rho_c >= 0.0 && rho_c <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho_c must lie in [0, 1]");
  }
  const auto n_low = static_cast<std::size_t>(std::llround(rho_c * static_cast<double>(n)));
  Rng rng(derive_seed(seed, "bimodal"));
  std::vector<double> c(n, c_high);
  for (std::size_t i : rng.sample_subset(n, n_low)) c[i] = c_low;
  return c;
}

Dataset apply_human_model(const Dataset& ds, const HumanErrorModel& model, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (const auto* g = std::get_if<GaussianHumans>(&model)) {
    if (!(g->sigma2 >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma2 must be >= 0");
    Rng rng(derive_seed(seed, "costs"));
    std::vector<double> c(n);
    for (double& v : c) v = std::abs(g->sigma2 * rng.normal());
    return ds.with_costs(std::move(c));
  }
  if (const auto* cat = std::get_if<CategoricalHumans>(&model)) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = ds.y(i);
      if (y != std::round(y)) {
        throw Error(ErrorCode::kInvalidScore,
                    "sample " + ds.id(i) + " has a non-integer response " + std::to_string(y));
      }
      c[i] = categorical_cost(static_cast<int>(y), cat->scale_points, cat->p).cost;
    }
    return ds.with_costs(std::move(c));
  }
  if (const auto* ann = std::get_if<AnnotatorHumans>(&model)) {
    if (ann->scores.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "one score list per sample is required");
    }
    std::vector<double> y(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = mean_score(ann->scores[i]);
      c[i] = annotator_cost(y[i], ann->scores[i]);
    }
    return ds.with_responses(std::move(y)).with_costs(std::move(c));
  }
  const auto& bi = std::get<BimodalHumans>(model);
  return ds.with_costs(bimodal_costs(n, bi.rho_c, seed, bi.c_low, bi.c_high));
}

Split split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto n_train =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 2 || n_train >= n) {
    throw Error(ErrorCode::kTooSmall, "split of " + std::to_string(n) + " samples leaves " +
                                          std::to_string(n_train) + " for training and " +
                                          std::to_string(n - std::min(n, n_train)) +
                                          " for testing");
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(perm);
  std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {ds.subset(train), ds.subset(test)};
}

}  // namespace rha
