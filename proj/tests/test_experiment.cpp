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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "rha/error.hpp"
#include "rha/experiment.hpp"

using namespace rha;
using namespace rha::experiment;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  SyntheticConfig syn;
  syn.n_samples = 100;
  cfg.source.synthetic = syn;
  cfg.budgets = {0, 10, 30};
  cfg.algorithms = {Algorithm::kGreedy, Algorithm::kTriage, Algorithm::kRandom, Algorithm::kDs};
  cfg.seeds = {1, 2};
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rha_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("sweep rows come in canonical order with consistent losses") {
  const auto cfg = small_config();
  const auto cells = run_sweep(cfg);
  REQUIRE(cells.size() == 4 * 2 * 3);
  std::size_t i = 0;
  for (auto a : cfg.algorithms) {
    for (auto s : cfg.seeds) {
      for (auto n : cfg.budgets) {
        CHECK(cells[i].row.algorithm == a);
        CHECK(cells[i].row.seed == s);
        CHECK(cells[i].row.n == n);
        CHECK(cells[i].selection.human_set.size() <= n);
        ++i;
      }
    }
  }
  for (const auto& c : cells) {
    const auto data = prepare_seed(cfg, c.row.seed);
    CHECK(data.train.size() == 80);
    CHECK(oracle::rel_close(c.row.train_loss, loss(data.train, c.selection.human_set, cfg.lambda),
                            1e-8));
    CHECK(c.row.wall_ms == 0.0);
  }
  // n = 0 is the machine-only baseline: nothing deferred.
  CHECK(cells[0].row.deferral_rate == 0.0);
  CHECK(cells[0].row.test_mse == cells[0].row.machine_mse);
}

TEST_CASE("worker pool does not change the output") {
  auto cfg = small_config();
  cfg.output_dir = scratch("seq");
  sweep(cfg);
  auto par = cfg;
  par.jobs = 5;
  par.output_dir = scratch("par");
  sweep(par);
  CHECK(slurp(cfg.output_dir / "results.csv") == slurp(par.output_dir / "results.csv"));
  const auto name = trace_file_name(Algorithm::kGreedy, 2, 30);
  CHECK(slurp(cfg.output_dir / "traces" / name) == slurp(par.output_dir / "traces" / name));
  CHECK(slurp(cfg.output_dir / "results.csv")
            .rfind("algorithm,seed,n,lambda,train_loss,neg_log_loss,test_mse,machine_mse,"
                   "human_cost_mean,deferral_rate,wall_ms\n",
                   0) == 0);
  fs::remove_all(cfg.output_dir);
  fs::remove_all(par.output_dir);
}

TEST_CASE("cap violations are raised before any work") {
  auto cfg = small_config();
  cfg.budgets = {81};
  CHECK_THROWS_AS(run_sweep(cfg), Error);
  try {
    run_sweep(cfg);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetTooLarge);
  }
  cfg.budgets = {2};
  cfg.algorithms = {Algorithm::kExhaustive};
  try {
    run_sweep(cfg);
    FAIL("expected a cap violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
  cfg.source.synthetic->n_samples = 25;  // 20 training samples
  CHECK(run_sweep(cfg).size() == 2);
}

TEST_CASE("audit passes on a normal run") {
  auto cfg = small_config();
  cfg.audit = true;
  CHECK_NOTHROW(run_sweep(cfg));
}

TEST_CASE("bimodal human model is applied per seed") {
  auto cfg = small_config();
  cfg.human_model = BimodalHumans{0.5, 1e-4, 0.5};
  const auto d = prepare_seed(cfg, 1);
  for (double c : d.train.costs()) CHECK((c == 1e-4 || c == 0.5));
}

TEST_CASE("certify") {
  const auto b = oracle::instance_b();
  const auto r = certify(b, 7.0, 1);
  CHECK(r.applicable);
  CHECK(r.pass);
  CHECK(r.greedy_set == r.optimal_set);
  const auto zero = certify(b, 7.0, 0);
  CHECK(zero.pass);
  CHECK(zero.greedy_gain == 0.0);
  const auto a = certify(oracle::instance_a(), 1.0, 1);
  CHECK_FALSE(a.applicable);
  CHECK_FALSE(a.reason.empty());
}
