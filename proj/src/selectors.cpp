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

#include "rha/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "rha/error.hpp"
#include "rha/random.hpp"

namespace rha {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_budget(const Dataset& ds, std::size_t budget) {
  if (budget > ds.size()) {
    throw Error(ErrorCode::kBudgetTooLarge, "budget " + std::to_string(budget) +
                                                " exceeds the " + std::to_string(ds.size()) +
                                                " available samples");
  }
}

double neg_log(double loss_value) {
  return loss_value > 0.0 ? -std::log(loss_value) : kInf;
}

// Index of the largest value; first index wins ties. NaN never wins.
std::size_t argmax_first(const std::vector<double>& values, const std::vector<char>& skip) {
  std::size_t best = values.size();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (skip[k] || std::isnan(values[k])) continue;
    if (best == values.size() || values[k] > values[best]) best = k;
  }
  return best;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kDs: return "ds";
    case Algorithm::kTriage: return "triage";
    case Algorithm::kRandom: return "random";
    case Algorithm::kExhaustive: return "exhaustive";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kGreedy, Algorithm::kDs, Algorithm::kTriage, Algorithm::kRandom,
                 Algorithm::kExhaustive}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

Selection make_selection(const Dataset& ds, double lambda, IndexSet human) {
  Selection sel;
  ObjectiveState st = init_state(ds, lambda);
  double prev = st.loss();
  std::size_t step = 0;
  for (std::size_t k : human) {
    st = with_human(st, k);
    const double now = st.loss();
    sel.trace.push_back({++step, k, neg_log(now) - neg_log(prev), now});
    prev = now;
  }
  sel.human_set = std::move(human);
  sel.loss_value = st.loss();
  sel.neg_log_loss = neg_log(sel.loss_value);
  if (st.machine_count() > 0) {
    sel.weights = linalg::spd_solve(*st.factor(), st.stats().moment);
  }
  return sel;
}

Selection greedy_select(const Dataset& ds, double lambda, std::size_t budget,
                        const GreedyOptions& opts) {
  require_budget(ds, budget);
  const std::size_t n = ds.size();
  ObjectiveState st = init_state(ds, lambda);
  Selection sel;
  std::vector<double> gains(n);
  std::vector<char> skip(n, 0);
  const unsigned workers = std::max(1u, opts.threads);

  for (std::size_t step = 1; step <= budget; ++step) {
    const GainScan scan(st);
    auto fill = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        gains[k] = skip[k] ? -kInf : scan.gain(k);
      }
    };
    if (workers == 1 || n < 64) {
      fill(0, n);
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (n + workers - 1) / workers;
      for (std::size_t lo = 0; lo < n; lo += chunk) {
        pool.emplace_back(fill, lo, std::min(n, lo + chunk));
      }
    }
    const std::size_t best = argmax_first(gains, skip);
    if (best == n) {
      throw Error(ErrorCode::kInvalidArgument, "no finite marginal gain at greedy step " +
                                                   std::to_string(step));
    }
    st = with_human(st, best);
    skip[best] = 1;
    sel.trace.push_back({step, best, gains[best], st.loss()});
  }
  sel.human_set = st.human_set();
  sel.loss_value = st.loss();
  sel.neg_log_loss = neg_log(sel.loss_value);
  if (st.machine_count() > 0) {
    sel.weights = linalg::spd_solve(*st.factor(), st.stats().moment);
  }
  return sel;
}

Selection exhaustive_select(const Dataset& ds, double lambda, std::size_t budget) {
  const std::size_t n = ds.size();
  if (n > kExhaustiveCap) {
    throw Error(ErrorCode::kTooLarge, "exhaustive search is capped at N = " +
                                          std::to_string(kExhaustiveCap) + ", got " +
                                          std::to_string(n));
  }
  require_budget(ds, budget);
  require_ground_set(ds);
  const MachineStats full = machine_stats(ds, {});

  auto subset_loss = [&](const IndexSet& human) {
    if (human.size() == n) {
      double c = 0.0;
      for (std::size_t k : human) c += ds.cost(k);
      return c;
    }
    MachineStats st = full;
    for (std::size_t k : human) {
      auto x = ds.x(k);
      st.gram.add_outer(x, -1.0);
      for (std::size_t j = 0; j < ds.dim(); ++j) st.moment[j] -= ds.y(k) * x[j];
      st.yy -= ds.y(k) * ds.y(k);
      st.cost_sum += ds.cost(k);
    }
    st.machine_count = n - human.size();
    const auto f = linalg::chol_factor(ridge_matrix(st, lambda));
    const auto w = linalg::spd_solve(f, st.moment);
    return std::max(0.0, st.cost_sum + st.yy - linalg::dot(st.moment, w));
  };

  IndexSet best;
  double best_loss = subset_loss(best);
  for (std::size_t size = 1; size <= budget; ++size) {
    IndexSet comb(size);
    std::iota(comb.begin(), comb.end(), std::size_t{0});
    while (true) {
      const double l = subset_loss(comb);
      if (l < best_loss ||
          (l == best_loss && std::lexicographical_compare(comb.begin(), comb.end(),
                                                          best.begin(), best.end()))) {
        best_loss = l;
        best = comb;
      }
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && comb[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return make_selection(ds, lambda, std::move(best));
}

Selection triage_select(const Dataset& ds, double lambda, std::size_t budget) {
  require_budget(ds, budget);
  const auto w = ridge_weights(ds, {}, lambda);
  const std::size_t n = ds.size();
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ds.y(i) - linalg::dot(ds.x(i), w);
    score[i] = r * r - ds.cost(i);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(budget);
  return make_selection(ds, lambda, std::move(order));
}

Selection random_select(const Dataset& ds, double lambda, std::size_t budget,
                        std::uint64_t seed) {
  require_budget(ds, budget);
  Rng rng(seed);
  return make_selection(ds, lambda, rng.sample_subset(ds.size(), budget));
}

// f and g are nonincreasing submodular, and ln l = f - g, so maximizing
// -ln l = g - f is a difference of submodular functions. Each iteration
// replaces f by a modular upper bound and g by a modular lower bound, both
// tight at the current set X, and maximizes the modular surrogate exactly.
//
//   upper bound of f:  f(X) - sum_{j in X\Y} f(j | V\j) + sum_{j in Y\X} f(j | {})
//   lower bound of g:  g({}) + sum_{j in Y} h(j), h from the chain that lists
//                      X first, then the rest, each in ascending index order.
Selection ds_select(const Dataset& ds, double lambda, std::size_t budget,
                    std::size_t max_iters) {
  require_budget(ds, budget);
  require_ground_set(ds);
  const std::size_t n = ds.size();
  if (budget == 0 || max_iters == 0) return make_selection(ds, lambda, {});

  const FullSetValues full = full_set_values(ds, lambda);
  const double f_empty = f_value(ds, {}, lambda);
  std::vector<double> add_gain(n), remove_gain(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t one[] = {j};
    add_gain[j] = f_value(ds, one, lambda) - f_empty;
    IndexSet all_but;
    all_but.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) all_but.push_back(i);
    }
    remove_gain[j] = full.f - f_value(ds, all_but, lambda);
  }

  IndexSet current;
  double current_obj = neg_log(loss(ds, current, lambda));
  IndexSet best = current;
  double best_obj = current_obj;

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    std::vector<char> in_x(n, 0);
    for (std::size_t k : current) in_x[k] = 1;

    std::vector<std::size_t> chain;
    chain.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (in_x[k]) chain.push_back(k);
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!in_x[k]) chain.push_back(k);
    }
    std::vector<double> h(n);
    ObjectiveState st = init_state(ds, lambda);
    double prev_g = st.g();
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t k = chain[pos];
      st = with_human(st, k);
      const double g_now = pos + 1 == n ? full.g : st.g();
      h[k] = g_now - prev_g;
      prev_g = g_now;
    }

    std::vector<double> weight(n);
    for (std::size_t j = 0; j < n; ++j) {
      double upper = in_x[j] ? remove_gain[j] : add_gain[j];
      if (in_x[j] && !std::isfinite(upper)) {
        // f(V) is -inf when every cost is zero; use the gain at X \ j instead.
        IndexSet without = current;
        std::erase(without, j);
        upper = f_value(ds, current, lambda) - f_value(ds, without, lambda);
      }
      weight[j] = h[j] - upper;
      if (std::isnan(weight[j])) weight[j] = -kInf;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
    IndexSet next;
    for (std::size_t k : order) {
      if (next.size() == budget || !(weight[k] > 0.0)) break;
      next.push_back(k);
    }
    std::sort(next.begin(), next.end());

    const double next_obj = neg_log(loss(ds, next, lambda));
    if (next_obj > best_obj) {
      best_obj = next_obj;
      best = next;
    }
    const bool improved = next_obj > current_obj + 1e-10;
    current = std::move(next);
    current_obj = next_obj;
    if (!improved) break;
  }
  return make_selection(ds, lambda, std::move(best));
}

double certificate_threshold(double opt_val, double alpha) {
  if (!std::isfinite(alpha) || alpha >= 1.0) {
    throw Error(ErrorCode::kInvalidAlpha, "alpha must be finite and below 1");
  }
  return opt_val / (1.0 + 1.0 / (1.0 - alpha));
}

bool approx_certificate(double greedy_val, double opt_val, double alpha) {
  return greedy_val >= certificate_threshold(opt_val, alpha) - 1e-10;
}

}  // namespace rha
