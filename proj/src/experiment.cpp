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

#include "rha/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rha/csv_io.hpp"
#include "rha/deferral.hpp"
#include "rha/error.hpp"
#include "rha/random.hpp"

namespace rha::experiment {

namespace {

Dataset load_base(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto& src = cfg.source;
  if (src.synthetic) {
    SyntheticConfig sc = *src.synthetic;
    sc.seed = seed;
    return gen_synthetic(sc);
  }
  if (src.input.empty()) throw Error(ErrorCode::kInvalidArgument, "no dataset source given");
  if (src.annotator_input) return io::read_annotator_csv(src.input).data;
  return io::read_dataset_csv(src.input);
}

std::size_t planned_train_size(const ExperimentConfig& cfg) {
  // Same rule as split(); computed up front so cap checks precede any work.
  std::size_t total = 0;
  if (cfg.source.synthetic) {
    total = cfg.source.synthetic->n_samples;
  } else {
    total = load_base(cfg, 0).size();
  }
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  return static_cast<std::size_t>(
      std::llround(cfg.train_fraction * static_cast<double>(total)));
}

void validate(const ExperimentConfig& cfg, std::size_t n_train) {
  if (cfg.budgets.empty()) throw Error(ErrorCode::kInvalidArgument, "empty budget grid");
  if (cfg.algorithms.empty()) throw Error(ErrorCode::kInvalidArgument, "no algorithms given");
  if (cfg.seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "no seeds given");
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
  for (std::size_t n : cfg.budgets) {
    if (n > n_train) {
      throw Error(ErrorCode::kBudgetTooLarge, "budget " + std::to_string(n) +
                                                  " exceeds the training size " +
                                                  std::to_string(n_train));
    }
  }
  const bool wants_exhaustive =
      std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::kExhaustive) !=
      cfg.algorithms.end();
  if (wants_exhaustive && n_train > kExhaustiveCap) {
    throw Error(ErrorCode::kTooLarge, "exhaustive search needs a training size <= " +
                                          std::to_string(kExhaustiveCap) + ", got " +
                                          std::to_string(n_train));
  }
}

Selection run_selector(Algorithm a, const Dataset& train, double lambda, std::size_t n,
                       std::uint64_t seed, std::size_t ds_max_iters) {
  switch (a) {
    case Algorithm::kGreedy: return greedy_select(train, lambda, n);
    case Algorithm::kDs: return ds_select(train, lambda, n, ds_max_iters);
    case Algorithm::kTriage: return triage_select(train, lambda, n);
    case Algorithm::kRandom: return random_select(train, lambda, n, seed);
    case Algorithm::kExhaustive: return exhaustive_select(train, lambda, n);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b));
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, Algorithm a, std::size_t n) {
  return derive_seed(seed, algorithm_name(a), n);
}

SeedData prepare_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  Dataset base = load_base(cfg, seed);
  if (cfg.human_model) base = apply_human_model(base, *cfg.human_model, seed);
  auto parts = split(base, cfg.train_fraction, seed);
  return {seed, std::move(parts.train), std::move(parts.test)};
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg, planned_train_size(cfg));

  std::vector<SeedData> data;
  data.reserve(cfg.seeds.size());
  for (std::uint64_t s : cfg.seeds) data.push_back(prepare_seed(cfg, s));

  struct Job {
    std::size_t alg, seed, n;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      for (std::size_t b = 0; b < cfg.budgets.size(); ++b) jobs.push_back({a, s, b});
    }
  }
  std::vector<SweepCell> cells(jobs.size());

  auto run_one = [&](std::size_t j) {
    const Job& job = jobs[j];
    const Algorithm alg = cfg.algorithms[job.alg];
    const SeedData& sd = data[job.seed];
    const std::size_t n = cfg.budgets[job.n];
    const std::uint64_t stream = cell_seed(sd.seed, alg, n);

    const auto t0 = std::chrono::steady_clock::now();
    Selection sel = run_selector(alg, sd.train, cfg.lambda, n, stream, cfg.ds_max_iters);
    const auto t1 = std::chrono::steady_clock::now();

    if (cfg.audit) {
      const double batch = loss(sd.train, sel.human_set, cfg.lambda);
      if (!close(sel.loss_value, batch)) {
        throw Error(ErrorCode::kAuditFailed,
                    std::string(algorithm_name(alg)) + " seed " + std::to_string(sd.seed) +
                        " n " + std::to_string(n) + ": recorded loss " +
                        io::format_real(sel.loss_value) + " vs batch " + io::format_real(batch));
      }
    }

    EvalOptions eo;
    eo.sample_human_predictions = cfg.sample_human_predictions;
    eo.seed = derive_seed(stream, "eval");
    const EvalReport ev = evaluate(sd.test, sd.train, sel, eo);

    ResultRow row;
    row.algorithm = alg;
    row.seed = sd.seed;
    row.n = n;
    row.lambda = cfg.lambda;
    row.train_loss = sel.loss_value;
    row.neg_log_loss = sel.neg_log_loss;
    row.test_mse = ev.overall_mse;
    row.machine_mse = ev.machine_mse;
    row.human_cost_mean = ev.human_cost_mean;
    row.deferral_rate = ev.deferral_rate;
    row.wall_ms =
        cfg.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
    std::ostringstream trace;
    io::write_trace_csv(sel, sd.train, trace);
    cells[j] = {row, std::move(sel), std::move(trace).str()};
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(jobs.size())));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_one(j);
    return cells;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_job = jobs.size();
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) {
          try {
            run_one(j);
          } catch (...) {
            // Keep the error of the earliest cell so failures are reproducible too.
            std::lock_guard lock(failure_mu);
            if (j < failed_job) {
              failed_job = j;
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

std::string trace_file_name(Algorithm a, std::uint64_t seed, std::size_t n) {
  return std::string(algorithm_name(a)) + "_seed" + std::to_string(seed) + "_n" +
         std::to_string(n) + ".csv";
}

void write_results_csv(const std::vector<SweepCell>& cells, std::ostream& out) {
  out << "algorithm,seed,n,lambda,train_loss,neg_log_loss,test_mse,machine_mse,"
         "human_cost_mean,deferral_rate,wall_ms\n";
  for (const auto& c : cells) {
    const auto& r = c.row;
    out << algorithm_name(r.algorithm) << ',' << r.seed << ',' << r.n << ','
        << io::format_real(r.lambda) << ',' << io::format_real(r.train_loss) << ','
        << io::format_real(r.neg_log_loss) << ',' << io::format_real(r.test_mse) << ','
        << io::format_real(r.machine_mse) << ',' << io::format_real(r.human_cost_mean) << ','
        << io::format_real(r.deferral_rate) << ',' << io::format_real(r.wall_ms) << '\n';
  }
}

std::vector<SweepCell> sweep(const ExperimentConfig& cfg) {
  auto cells = run_sweep(cfg);
  if (cfg.output_dir.empty()) return cells;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create '" + cfg.output_dir.string() + "': " + ec.message());
  }
  {
    const fs::path path = cfg.output_dir / "results.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
    write_results_csv(cells, out);
    if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
  }
  if (cfg.write_traces) {
    const fs::path dir = cfg.output_dir / "traces";
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());
    for (const auto& c : cells) {
      const fs::path path = dir / trace_file_name(c.row.algorithm, c.row.seed, c.row.n);
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
      out << c.trace_csv;
      if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
    }
  }
  return cells;
}

CertifyReport certify(const Dataset& ds, double lambda, std::size_t budget) {
  require_ground_set(ds);
  if (ds.size() > kExhaustiveCap) {
    throw Error(ErrorCode::kTooLarge, "certify needs N <= " + std::to_string(kExhaustiveCap) +
                                          ", got " + std::to_string(ds.size()));
  }
  if (budget > ds.size()) {
    throw Error(ErrorCode::kBudgetTooLarge, "budget " + std::to_string(budget) +
                                                " exceeds N = " + std::to_string(ds.size()));
  }
  CertifyReport rep;
  rep.conditions = check_conditions(ds, lambda);

  const Selection g = greedy_select(ds, lambda, budget);
  const Selection opt = exhaustive_select(ds, lambda, budget);
  rep.greedy_set = g.human_set;
  rep.optimal_set = opt.human_set;
  rep.greedy_neg_log_loss = g.neg_log_loss;
  rep.optimal_neg_log_loss = opt.neg_log_loss;
  const double base = std::log(loss(ds, {}, lambda));
  rep.greedy_gain = base + g.neg_log_loss;
  rep.optimal_gain = base + opt.neg_log_loss;

  const auto& c = rep.conditions;
  if (!c.submodular_holds || !c.strict_decrease_holds) {
    rep.reason = "human error or lambda preconditions fail";
  } else if (!c.scaling_holds) {
    rep.reason = "total human cost below 1; run rescale first";
  } else if (!c.alpha_star || !(*c.alpha_star < 1.0)) {
    rep.reason = "curvature bound unavailable";
  }
  if (!rep.reason.empty()) return rep;

  rep.applicable = true;
  rep.alpha = *c.alpha_star;
  rep.threshold = certificate_threshold(rep.optimal_gain, rep.alpha);
  rep.pass = approx_certificate(rep.greedy_gain, rep.optimal_gain, rep.alpha);
  return rep;
}

}  // namespace rha::experiment
