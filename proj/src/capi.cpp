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

#include "rha/rha.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "rha/csv_io.hpp"
#include "rha/datagen.hpp"
#include "rha/deferral.hpp"
#include "rha/error.hpp"
#include "rha/experiment.hpp"
#include "rha/objective.hpp"
#include "rha/selectors.hpp"

struct rha_dataset {
  rha::Dataset data;
};

struct rha_selection {
  rha::Selection sel;
};

struct rha_sweep_config {
  rha::experiment::ExperimentConfig cfg;
};

namespace {

thread_local std::string last_error;

rha_status status_of(rha::ErrorCode code) {
  using rha::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kAlreadyHuman:
    case ErrorCode::kInvalidAlpha:
      return RHA_ERR_INVALID_ARGUMENT;
    case ErrorCode::kTooLarge:
    case ErrorCode::kBudgetTooLarge:
      return RHA_ERR_CAP;
    case ErrorCode::kNotSpd:
    case ErrorCode::kDowndateBreakdown:
    case ErrorCode::kEmptyMachineSet:
    case ErrorCode::kNoWeights:
      return RHA_ERR_NUMERIC;
    case ErrorCode::kHypothesisViolated:
      return RHA_ERR_PRECONDITION;
    case ErrorCode::kIo:
      return RHA_ERR_IO;
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kAllZeroCosts:
    case ErrorCode::kInvalidScore:
    case ErrorCode::kEmptyScores:
    case ErrorCode::kTooSmall:
    case ErrorCode::kParse:
    case ErrorCode::kAuditFailed:
      return RHA_ERR_DATA;
  }
  return RHA_ERR_INTERNAL;
}

rha_status fail(rha_status st, std::string msg) {
  last_error = std::move(msg);
  return st;
}

template <class F>
rha_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RHA_OK;
  } catch (const rha::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RHA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RHA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RHA_ERR_INTERNAL, "unknown exception");
  }
}

#define RHA_REQUIRE(cond, what) \
  if (!(cond)) return fail(RHA_ERR_INVALID_ARGUMENT, what)

rha_dataset* wrap(rha::Dataset ds) { return new rha_dataset{std::move(ds)}; }

rha::Algorithm to_cpp(rha_algorithm a) {
  switch (a) {
    case RHA_ALGO_GREEDY: return rha::Algorithm::kGreedy;
    case RHA_ALGO_DS: return rha::Algorithm::kDs;
    case RHA_ALGO_TRIAGE: return rha::Algorithm::kTriage;
    case RHA_ALGO_RANDOM: return rha::Algorithm::kRandom;
    case RHA_ALGO_EXHAUSTIVE: return rha::Algorithm::kExhaustive;
  }
  throw rha::Error(rha::ErrorCode::kInvalidArgument, "unknown algorithm");
}

rha_algorithm to_c(rha::Algorithm a) {
  switch (a) {
    case rha::Algorithm::kGreedy: return RHA_ALGO_GREEDY;
    case rha::Algorithm::kDs: return RHA_ALGO_DS;
    case rha::Algorithm::kTriage: return RHA_ALGO_TRIAGE;
    case rha::Algorithm::kRandom: return RHA_ALGO_RANDOM;
    case rha::Algorithm::kExhaustive: return RHA_ALGO_EXHAUSTIVE;
  }
  return RHA_ALGO_GREEDY;
}

rha::SyntheticConfig to_cpp(const rha_synthetic_config& c) {
  rha::SyntheticConfig out;
  out.dim = c.dim;
  out.n_samples = c.n_samples;
  if (c.response == RHA_RESPONSE_GAUSSIAN) {
    out.response = rha::Response::kGaussian;
  } else if (c.response == RHA_RESPONSE_LOGISTIC) {
    out.response = rha::Response::kLogistic;
  } else {
    throw rha::Error(rha::ErrorCode::kInvalidArgument, "unknown response model");
  }
  out.sigma1 = c.sigma1;
  out.sigma2 = c.sigma2;
  out.seed = c.seed;
  return out;
}

std::optional<rha::HumanErrorModel> to_cpp(const rha_human_model& m) {
  switch (m.kind) {
    case RHA_HUMAN_NONE: return std::nullopt;
    case RHA_HUMAN_GAUSSIAN: return rha::GaussianHumans{m.sigma2};
    case RHA_HUMAN_CATEGORICAL: return rha::CategoricalHumans{m.scale_points, m.p};
    case RHA_HUMAN_BIMODAL: return rha::BimodalHumans{m.rho_c, m.c_low, m.c_high};
  }
  throw rha::Error(rha::ErrorCode::kInvalidArgument, "unknown human model");
}

rha::Selection run_selector(const rha::Dataset& d, rha::Algorithm a, double lambda,
                            size_t budget, uint64_t seed) {
  switch (a) {
    case rha::Algorithm::kGreedy: return rha::greedy_select(d, lambda, budget);
    case rha::Algorithm::kDs: return rha::ds_select(d, lambda, budget);
    case rha::Algorithm::kTriage: return rha::triage_select(d, lambda, budget);
    case rha::Algorithm::kRandom: return rha::random_select(d, lambda, budget, seed);
    case rha::Algorithm::kExhaustive: return rha::exhaustive_select(d, lambda, budget);
  }
  throw rha::Error(rha::ErrorCode::kInvalidArgument, "unknown algorithm");
}

rha_condition_report to_c(const rha::ConditionReport& r) {
  rha_condition_report out{};
  out.gamma_min = r.gamma_min;
  out.lambda_required = r.lambda_required;
  out.max_sq_norm = r.max_sq_norm;
  out.total_cost = r.total_cost;
  out.submodular_holds = r.submodular_holds;
  out.strict_decrease_holds = r.strict_decrease_holds;
  out.scaling_holds = r.scaling_holds;
  out.has_alpha_star = r.alpha_star.has_value();
  out.alpha_star = r.alpha_star.value_or(0.0);
  return out;
}

}  // namespace

extern "C" {

const char* rha_last_error(void) { return last_error.c_str(); }

const char* rha_status_name(rha_status status) {
  switch (status) {
    case RHA_OK: return "ok";
    case RHA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RHA_ERR_DATA: return "data error";
    case RHA_ERR_IO: return "i/o error";
    case RHA_ERR_CAP: return "cap violation";
    case RHA_ERR_NUMERIC: return "numeric error";
    case RHA_ERR_PRECONDITION: return "precondition violated";
    case RHA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

rha_status rha_dataset_create(size_t n_samples, size_t dim, const double* features,
                              const double* y, const double* costs, const char* const* ids,
                              rha_dataset** out) {
  RHA_REQUIRE(out && features && y && costs, "null argument");
  return guarded([&] {
    std::vector<std::string> id_list;
    if (ids) id_list.assign(ids, ids + n_samples);
    *out = wrap(rha::Dataset(dim, std::vector<double>(features, features + n_samples * dim),
                             std::vector<double>(y, y + n_samples),
                             std::vector<double>(costs, costs + n_samples), std::move(id_list)));
  });
}

rha_status rha_dataset_read_csv(const char* path, rha_dataset** out) {
  RHA_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = wrap(rha::io::read_dataset_csv(std::filesystem::path(path))); });
}

rha_status rha_dataset_read_annotator_csv(const char* path, rha_dataset** out) {
  RHA_REQUIRE(path && out, "null argument");
  return guarded(
      [&] { *out = wrap(rha::io::read_annotator_csv(std::filesystem::path(path)).data); });
}

rha_status rha_dataset_write_csv(const rha_dataset* ds, const char* path) {
  RHA_REQUIRE(ds && path, "null argument");
  return guarded([&] { rha::io::write_dataset_csv(ds->data, std::filesystem::path(path)); });
}

void rha_dataset_free(rha_dataset* ds) { delete ds; }

size_t rha_dataset_size(const rha_dataset* ds) { return ds ? ds->data.size() : 0; }
size_t rha_dataset_dim(const rha_dataset* ds) { return ds ? ds->data.dim() : 0; }

rha_status rha_dataset_sample(const rha_dataset* ds, size_t i, double* x_out, double* y_out,
                              double* c_out) {
  RHA_REQUIRE(ds, "null dataset");
  RHA_REQUIRE(i < ds->data.size(), "sample index out of range");
  if (x_out) {
    const auto x = ds->data.x(i);
    for (size_t j = 0; j < x.size(); ++j) x_out[j] = x[j];
  }
  if (y_out) *y_out = ds->data.y(i);
  if (c_out) *c_out = ds->data.cost(i);
  return RHA_OK;
}

const char* rha_dataset_id(const rha_dataset* ds, size_t i) {
  if (!ds || i >= ds->data.size()) return nullptr;
  return ds->data.id(i).c_str();
}

void rha_synthetic_config_init(rha_synthetic_config* cfg) {
  if (!cfg) return;
  const rha::SyntheticConfig d;
  cfg->dim = d.dim;
  cfg->n_samples = d.n_samples;
  cfg->response = RHA_RESPONSE_GAUSSIAN;
  cfg->sigma1 = d.sigma1;
  cfg->sigma2 = d.sigma2;
  cfg->seed = d.seed;
}

rha_status rha_generate_synthetic(const rha_synthetic_config* cfg, rha_dataset** out) {
  RHA_REQUIRE(cfg && out, "null argument");
  return guarded([&] { *out = wrap(rha::gen_synthetic(to_cpp(*cfg))); });
}

rha_status rha_response_from_name(const char* name, rha_response* out) {
  RHA_REQUIRE(name && out, "null argument");
  const auto r = rha::parse_response(name);
  if (!r) return fail(RHA_ERR_INVALID_ARGUMENT, std::string("unknown response '") + name + "'");
  *out = *r == rha::Response::kGaussian ? RHA_RESPONSE_GAUSSIAN : RHA_RESPONSE_LOGISTIC;
  return RHA_OK;
}

void rha_human_model_init(rha_human_model* model) {
  if (!model) return;
  *model = rha_human_model{};
  model->kind = RHA_HUMAN_NONE;
  model->sigma2 = rha::GaussianHumans{}.sigma2;
  model->scale_points = rha::CategoricalHumans{}.scale_points;
  model->p = rha::CategoricalHumans{}.p;
  model->rho_c = rha::BimodalHumans{}.rho_c;
  model->c_low = rha::BimodalHumans{}.c_low;
  model->c_high = rha::BimodalHumans{}.c_high;
}

rha_status rha_apply_human_model(const rha_dataset* ds, const rha_human_model* model,
                                 uint64_t seed, rha_dataset** out) {
  RHA_REQUIRE(ds && model && out, "null argument");
  return guarded([&] {
    const auto m = to_cpp(*model);
    *out = wrap(m ? rha::apply_human_model(ds->data, *m, seed) : ds->data);
  });
}

rha_status rha_split(const rha_dataset* ds, double train_fraction, uint64_t seed,
                     rha_dataset** train_out, rha_dataset** test_out) {
  RHA_REQUIRE(ds && train_out && test_out, "null argument");
  return guarded([&] {
    auto parts = rha::split(ds->data, train_fraction, seed);
    auto* train = wrap(std::move(parts.train));
    *test_out = wrap(std::move(parts.test));
    *train_out = train;
  });
}

rha_status rha_rescale_for_scaling(const rha_dataset* ds, rha_dataset** out,
                                   double* scale_out) {
  RHA_REQUIRE(ds && out, "null argument");
  return guarded([&] {
    auto r = rha::rescale_for_scaling(ds->data);
    if (scale_out) *scale_out = r.scale;
    *out = wrap(std::move(r.data));
  });
}

rha_status rha_check_conditions(const rha_dataset* ds, double lambda, rha_condition_report* out) {
  RHA_REQUIRE(ds && out, "null argument");
  return guarded([&] { *out = to_c(rha::check_conditions(ds->data, lambda)); });
}

rha_status rha_loss(const rha_dataset* ds, const size_t* human, size_t count, double lambda,
                    double* out) {
  RHA_REQUIRE(ds && out && (human || count == 0), "null argument");
  return guarded([&] {
    const std::vector<std::size_t> s(human, human + count);
    *out = rha::loss(ds->data, s, lambda);
  });
}

rha_status rha_algorithm_from_name(const char* name, rha_algorithm* out) {
  RHA_REQUIRE(name && out, "null argument");
  const auto a = rha::parse_algorithm(name);
  if (!a) return fail(RHA_ERR_INVALID_ARGUMENT, std::string("unknown algorithm '") + name + "'");
  *out = to_c(*a);
  return RHA_OK;
}

const char* rha_algorithm_name(rha_algorithm algo) {
  try {
    return rha::algorithm_name(to_cpp(algo)).data();
  } catch (...) {
    return "unknown";
  }
}

rha_status rha_select(const rha_dataset* ds, rha_algorithm algo, double lambda, size_t budget,
                      uint64_t seed, rha_selection** out) {
  RHA_REQUIRE(ds && out, "null argument");
  return guarded([&] {
    auto sel = run_selector(ds->data, to_cpp(algo), lambda, budget, seed);
    *out = new rha_selection{std::move(sel)};
  });
}

void rha_selection_free(rha_selection* sel) { delete sel; }

size_t rha_selection_size(const rha_selection* sel) {
  return sel ? sel->sel.human_set.size() : 0;
}

size_t rha_selection_indices(const rha_selection* sel, size_t* out, size_t capacity) {
  if (!sel) return 0;
  const auto& s = sel->sel.human_set;
  const size_t n = std::min(capacity, s.size());
  for (size_t i = 0; i < n && out; ++i) out[i] = s[i];
  return out ? n : 0;
}

int rha_selection_weights(const rha_selection* sel, double* out, size_t capacity) {
  if (!sel || !sel->sel.weights) return 0;
  const auto& w = *sel->sel.weights;
  for (size_t i = 0; i < std::min(capacity, w.size()) && out; ++i) out[i] = w[i];
  return 1;
}

double rha_selection_loss(const rha_selection* sel) { return sel ? sel->sel.loss_value : 0.0; }

double rha_selection_neg_log_loss(const rha_selection* sel) {
  return sel ? sel->sel.neg_log_loss : 0.0;
}

size_t rha_selection_trace_length(const rha_selection* sel) {
  return sel ? sel->sel.trace.size() : 0;
}

rha_status rha_selection_trace_step(const rha_selection* sel, size_t i, rha_trace_step* out) {
  RHA_REQUIRE(sel && out, "null argument");
  RHA_REQUIRE(i < sel->sel.trace.size(), "trace index out of range");
  const auto& t = sel->sel.trace[i];
  *out = rha_trace_step{t.step, t.chosen, t.marginal_gain, t.loss_after};
  return RHA_OK;
}

rha_status rha_evaluate(const rha_dataset* test, const rha_dataset* train,
                        const rha_selection* sel, rha_eval_report* out) {
  RHA_REQUIRE(test && train && sel && out, "null argument");
  return guarded([&] {
    const auto r = rha::evaluate(test->data, train->data, sel->sel);
    *out = rha_eval_report{r.n_test,      r.n_deferred,      r.deferral_rate,
                           r.machine_mse, r.human_cost_mean, r.overall_mse};
  });
}

rha_status rha_certify(const rha_dataset* ds, double lambda, size_t budget,
                       rha_certificate* out) {
  RHA_REQUIRE(ds && out, "null argument");
  return guarded([&] {
    const auto r = rha::experiment::certify(ds->data, lambda, budget);
    rha_certificate c{};
    c.conditions = to_c(r.conditions);
    c.applicable = r.applicable;
    c.greedy_neg_log_loss = r.greedy_neg_log_loss;
    c.optimal_neg_log_loss = r.optimal_neg_log_loss;
    c.greedy_gain = r.greedy_gain;
    c.optimal_gain = r.optimal_gain;
    c.alpha = r.alpha;
    c.threshold = r.threshold;
    c.pass = r.pass;
    std::snprintf(c.reason, sizeof(c.reason), "%s", r.reason.c_str());
    *out = c;
  });
}

rha_status rha_sweep_config_create(rha_sweep_config** out) {
  RHA_REQUIRE(out, "null argument");
  return guarded([&] { *out = new rha_sweep_config{}; });
}

void rha_sweep_config_free(rha_sweep_config* cfg) { delete cfg; }

rha_status rha_sweep_set_synthetic(rha_sweep_config* cfg, const rha_synthetic_config* data) {
  RHA_REQUIRE(cfg && data, "null argument");
  return guarded([&] {
    cfg->cfg.source = {};
    cfg->cfg.source.synthetic = to_cpp(*data);
  });
}

rha_status rha_sweep_set_input(rha_sweep_config* cfg, const char* path, int annotator) {
  RHA_REQUIRE(cfg && path, "null argument");
  return guarded([&] {
    cfg->cfg.source = {};
    cfg->cfg.source.input = path;
    cfg->cfg.source.annotator_input = annotator != 0;
  });
}

rha_status rha_sweep_set_lambda(rha_sweep_config* cfg, double lambda) {
  RHA_REQUIRE(cfg, "null argument");
  cfg->cfg.lambda = lambda;
  return RHA_OK;
}

rha_status rha_sweep_set_budgets(rha_sweep_config* cfg, const size_t* budgets, size_t count) {
  RHA_REQUIRE(cfg && (budgets || count == 0), "null argument");
  return guarded([&] { cfg->cfg.budgets.assign(budgets, budgets + count); });
}

rha_status rha_sweep_set_algorithms(rha_sweep_config* cfg, const rha_algorithm* algos,
                                    size_t count) {
  RHA_REQUIRE(cfg && (algos || count == 0), "null argument");
  return guarded([&] {
    std::vector<rha::Algorithm> list;
    for (size_t i = 0; i < count; ++i) list.push_back(to_cpp(algos[i]));
    cfg->cfg.algorithms = std::move(list);
  });
}

rha_status rha_sweep_set_seeds(rha_sweep_config* cfg, const uint64_t* seeds, size_t count) {
  RHA_REQUIRE(cfg && (seeds || count == 0), "null argument");
  return guarded([&] { cfg->cfg.seeds.assign(seeds, seeds + count); });
}

rha_status rha_sweep_set_train_fraction(rha_sweep_config* cfg, double fraction) {
  RHA_REQUIRE(cfg, "null argument");
  cfg->cfg.train_fraction = fraction;
  return RHA_OK;
}

rha_status rha_sweep_set_human_model(rha_sweep_config* cfg, const rha_human_model* model) {
  RHA_REQUIRE(cfg && model, "null argument");
  return guarded([&] { cfg->cfg.human_model = to_cpp(*model); });
}

rha_status rha_sweep_set_output_dir(rha_sweep_config* cfg, const char* dir) {
  RHA_REQUIRE(cfg && dir, "null argument");
  return guarded([&] { cfg->cfg.output_dir = dir; });
}

rha_status rha_sweep_set_jobs(rha_sweep_config* cfg, unsigned jobs) {
  RHA_REQUIRE(cfg, "null argument");
  RHA_REQUIRE(jobs >= 1, "jobs must be at least 1");
  cfg->cfg.jobs = jobs;
  return RHA_OK;
}

rha_status rha_sweep_set_flags(rha_sweep_config* cfg, int timing, int audit, int write_traces,
                               int sample_human_predictions) {
  RHA_REQUIRE(cfg, "null argument");
  cfg->cfg.timing = timing != 0;
  cfg->cfg.audit = audit != 0;
  cfg->cfg.write_traces = write_traces != 0;
  cfg->cfg.sample_human_predictions = sample_human_predictions != 0;
  return RHA_OK;
}

rha_status rha_sweep_set_ds_max_iters(rha_sweep_config* cfg, size_t iters) {
  RHA_REQUIRE(cfg, "null argument");
  RHA_REQUIRE(iters >= 1, "ds iterations must be at least 1");
  cfg->cfg.ds_max_iters = iters;
  return RHA_OK;
}

rha_status rha_sweep_run(const rha_sweep_config* cfg, size_t* rows_out) {
  RHA_REQUIRE(cfg, "null argument");
  return guarded([&] {
    const auto cells = rha::experiment::sweep(cfg->cfg);
    if (rows_out) *rows_out = cells.size();
  });
}

}  // extern "C"
