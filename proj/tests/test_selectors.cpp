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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rha/error.hpp"
#include "rha/objective.hpp"
#include "rha/selectors.hpp"

using namespace rha;
using doctest::Approx;

namespace {

std::vector<std::size_t> sorted(std::vector<std::size_t> s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("greedy on instance A") {
  const auto a = oracle::instance_a();
  const auto s0 = greedy_select(a, 1.0, 0);
  CHECK(s0.human_set.empty());
  REQUIRE(s0.weights);
  CHECK((*s0.weights)[0] == Approx(4.0 / 7.0));

  const auto s1 = greedy_select(a, 1.0, 1);
  CHECK(s1.human_set == std::vector<std::size_t>{0});
  CHECK(s1.loss_value == Approx(0.3));
  REQUIRE(s1.trace.size() == 1);
  CHECK(s1.trace[0].step == 1);
  CHECK(s1.trace[0].marginal_gain == Approx(2.2028).epsilon(1e-4));

  const auto s2 = greedy_select(a, 1.0, 2);
  CHECK(sorted(s2.human_set) == std::vector<std::size_t>{0, 1});
  CHECK(s2.loss_value == Approx(0.2));
  CHECK_FALSE(s2.weights.has_value());
  CHECK(s2.neg_log_loss == Approx(-std::log(0.2)));

  CHECK_THROWS_AS(greedy_select(a, 1.0, 3), Error);
}

TEST_CASE("exhaustive search") {
  const auto a = oracle::instance_a();
  CHECK(exhaustive_select(a, 1.0, 0).human_set.empty());
  const auto s1 = exhaustive_select(a, 1.0, 1);
  CHECK(s1.human_set == std::vector<std::size_t>{0});
  CHECK(s1.loss_value == Approx(0.3));

  Rng rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const auto inst = oracle::free_instance(rng, 1 + rng.below(3), 2 + rng.below(7));
    const std::size_t n = inst.data.size();
    for (std::size_t budget = 0; budget <= n; ++budget) {
      const auto got = exhaustive_select(inst.data, inst.lambda, budget);
      const auto [want_set, want_loss] = oracle::brute_force_opt(inst.data, inst.lambda, budget);
      CHECK(got.human_set.size() <= budget);
      CHECK(oracle::rel_close(got.loss_value, want_loss, 1e-9));
    }
    // Full budget returns V exactly when every proper subset is worse than sum c.
    const auto full = exhaustive_select(inst.data, inst.lambda, n);
    bool v_wins = true;
    for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      const double l = oracle::direct_loss(inst.data, oracle::from_mask(mask, n), inst.lambda);
      if (!(inst.data.total_cost() < l)) v_wins = false;
    }
    CHECK((full.human_set.size() == n) == v_wins);
  }

  std::vector<double> x(21), y(21, 1.0), c(21, 0.1);
  for (std::size_t i = 0; i < 21; ++i) x[i] = static_cast<double>(i);
  CHECK_THROWS_AS(exhaustive_select(Dataset(1, x, y, c), 1.0, 2), Error);
}

TEST_CASE("triage") {
  const auto a = oracle::instance_a();
  const auto s = triage_select(a, 1.0, 1);
  CHECK(s.human_set == std::vector<std::size_t>{0});
  CHECK(triage_select(a, 1.0, 2).human_set.size() == 2);

  // Identical samples: every score ties, so the first indices win.
  const Dataset same(1, {1.0, 1.0, 1.0, 1.0}, {2.0, 2.0, 2.0, 2.0}, {0.1, 0.1, 0.1, 0.1});
  CHECK(triage_select(same, 1.0, 2).human_set == std::vector<std::size_t>{0, 1});
}

TEST_CASE("ds baseline") {
  const auto a = oracle::instance_a();
  CHECK(ds_select(a, 1.0, 0, 5).human_set.empty());
  const auto s = ds_select(a, 1.0, 1);
  CHECK(s.loss_value <= 19.0 / 7.0 + 1e-12);
  CHECK(s.loss_value >= 0.3 - 1e-12);

  Rng rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = oracle::hypothesis_instance(rng, 2, 10);
    for (std::size_t budget : {1u, 3u, 6u}) {
      const auto got = ds_select(inst.data, inst.lambda, budget);
      const auto opt = exhaustive_select(inst.data, inst.lambda, budget);
      CHECK(got.human_set.size() <= budget);
      CHECK(got.loss_value >= opt.loss_value - 1e-12);
      CHECK(got.loss_value <= loss(inst.data, std::vector<std::size_t>{}, inst.lambda) + 1e-12);
    }
  }
}

TEST_CASE("random baseline") {
  const auto a = oracle::instance_a();
  CHECK(random_select(a, 1.0, 0, 3).human_set.empty());
  CHECK(random_select(a, 1.0, 2, 3).human_set.size() == 2);
  Rng rng(33);
  const auto inst = oracle::free_instance(rng, 3, 30);
  const auto r1 = random_select(inst.data, inst.lambda, 10, 99);
  const auto r2 = random_select(inst.data, inst.lambda, 10, 99);
  CHECK(r1.human_set == r2.human_set);
  CHECK(r1.human_set.size() == 10);
  CHECK(random_select(inst.data, inst.lambda, 10, 100).human_set != r1.human_set);
}

TEST_CASE("certificate arithmetic") {
  CHECK(certificate_threshold(3.0, 0.0) == Approx(1.5));
  for (double alpha : {0.0, 0.3, 0.9, 0.999}) CHECK(approx_certificate(2.5, 2.5, alpha));
  CHECK_FALSE(approx_certificate(1.0, 3.0, 0.0));
  CHECK_THROWS_AS(approx_certificate(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(certificate_threshold(1.0, std::nan("")), Error);
}

TEST_CASE("every selector respects the budget and reports a consistent loss") {
  Rng rng(34);
  for (int rep = 0; rep < 15; ++rep) {
    const auto inst = oracle::free_instance(rng, 1 + rng.below(4), 4 + rng.below(9));
    const std::size_t n = inst.data.size();
    for (std::size_t budget = 0; budget <= n; budget += 2) {
      const std::vector<Selection> all{
          greedy_select(inst.data, inst.lambda, budget),
          exhaustive_select(inst.data, inst.lambda, budget),
          triage_select(inst.data, inst.lambda, budget),
          ds_select(inst.data, inst.lambda, budget),
          random_select(inst.data, inst.lambda, budget, 5),
      };
      for (const auto& s : all) {
        CHECK(s.human_set.size() <= budget);
        CHECK(oracle::rel_close(s.loss_value, loss(inst.data, s.human_set, inst.lambda), 1e-8));
        CHECK(s.neg_log_loss == Approx(-std::log(s.loss_value)));
        CHECK(s.weights.has_value() == (s.human_set.size() < n));
      }
    }
  }
}

TEST_CASE("greedy trace strictly decreases under the strict hypotheses") {
  Rng rng(35);
  for (int rep = 0; rep < 30; ++rep) {
    const auto inst = oracle::hypothesis_instance(rng, 1 + rng.below(4), 3 + rng.below(20));
    REQUIRE(check_conditions(inst.data, inst.lambda).strict_decrease_holds);
    const std::size_t n = inst.data.size();
    const auto s = greedy_select(inst.data, inst.lambda, n);
    double prev = loss(inst.data, std::vector<std::size_t>{}, inst.lambda);
    for (const auto& t : s.trace) {
      CHECK(t.loss_after < prev);
      CHECK(t.marginal_gain > 0.0);
      prev = t.loss_after;
    }
  }
}

TEST_CASE("greedy does not depend on the number of scan threads") {
  Rng rng(36);
  for (int rep = 0; rep < 5; ++rep) {
    const auto inst = oracle::free_instance(rng, 4, 200);
    const auto one = greedy_select(inst.data, inst.lambda, 40);
    for (unsigned threads : {2u, 3u, 8u}) {
      const auto many = greedy_select(inst.data, inst.lambda, 40, GreedyOptions{threads});
      CHECK(many.human_set == one.human_set);
      CHECK(many.loss_value == one.loss_value);
    }
  }
}
