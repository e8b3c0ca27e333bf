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

/* Ridge regression under human assistance: C interface.
 *
 * Every fallible call returns an rha_status; on failure the message of the
 * last error on the calling thread is available from rha_last_error().
 * Handles are opaque and owned by the caller, who releases them with the
 * matching *_free function. Out-parameters are left untouched on failure.
 */
#ifndef RHA_RHA_H
#define RHA_RHA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RHA_BUILDING_LIBRARY)
#define RHA_API __declspec(dllexport)
#else
#define RHA_API __declspec(dllimport)
#endif
#else
#define RHA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rha_status {
  RHA_OK = 0,
  RHA_ERR_INVALID_ARGUMENT = 1, /* bad parameter or configuration */
  RHA_ERR_DATA = 2,             /* malformed or inconsistent data */
  RHA_ERR_IO = 3,
  RHA_ERR_CAP = 4,              /* budget above N, exhaustive above 20 samples */
  RHA_ERR_NUMERIC = 5,          /* not positive definite, empty machine set */
  RHA_ERR_PRECONDITION = 6,     /* hypotheses for the curvature bound fail */
  RHA_ERR_INTERNAL = 7
} rha_status;

RHA_API const char* rha_last_error(void);
RHA_API const char* rha_status_name(rha_status status);

typedef struct rha_dataset rha_dataset;
typedef struct rha_selection rha_selection;
typedef struct rha_sweep_config rha_sweep_config;

/* ---- datasets ---- */

/* features: n_samples x dim, row-major. ids may be NULL. */
RHA_API rha_status rha_dataset_create(size_t n_samples, size_t dim, const double* features,
                                      const double* y, const double* costs,
                                      const char* const* ids, rha_dataset** out);
RHA_API rha_status rha_dataset_read_csv(const char* path, rha_dataset** out);
RHA_API rha_status rha_dataset_read_annotator_csv(const char* path, rha_dataset** out);
RHA_API rha_status rha_dataset_write_csv(const rha_dataset* ds, const char* path);
RHA_API void rha_dataset_free(rha_dataset* ds);

RHA_API size_t rha_dataset_size(const rha_dataset* ds);
RHA_API size_t rha_dataset_dim(const rha_dataset* ds);
/* x_out may be NULL; otherwise it receives dim values. */
RHA_API rha_status rha_dataset_sample(const rha_dataset* ds, size_t i, double* x_out,
                                      double* y_out, double* c_out);
RHA_API const char* rha_dataset_id(const rha_dataset* ds, size_t i);

typedef enum rha_response { RHA_RESPONSE_GAUSSIAN = 0, RHA_RESPONSE_LOGISTIC = 1 } rha_response;

typedef struct rha_synthetic_config {
  size_t dim;
  size_t n_samples;
  rha_response response;
  double sigma1;
  double sigma2;
  uint64_t seed;
} rha_synthetic_config;

RHA_API void rha_synthetic_config_init(rha_synthetic_config* cfg);
RHA_API rha_status rha_generate_synthetic(const rha_synthetic_config* cfg, rha_dataset** out);
RHA_API rha_status rha_response_from_name(const char* name, rha_response* out);

typedef enum rha_human_kind {
  RHA_HUMAN_NONE = 0, /* keep the costs already in the data */
  RHA_HUMAN_GAUSSIAN = 1,
  RHA_HUMAN_CATEGORICAL = 2,
  RHA_HUMAN_BIMODAL = 3
} rha_human_kind;

typedef struct rha_human_model {
  rha_human_kind kind;
  double sigma2;    /* gaussian */
  int scale_points; /* categorical */
  double p;         /* categorical */
  double rho_c;     /* bimodal */
  double c_low;     /* bimodal */
  double c_high;    /* bimodal */
} rha_human_model;

RHA_API void rha_human_model_init(rha_human_model* model);
RHA_API rha_status rha_apply_human_model(const rha_dataset* ds, const rha_human_model* model,
                                         uint64_t seed, rha_dataset** out);

/* Train/test split keeping the original row order in both parts. */
RHA_API rha_status rha_split(const rha_dataset* ds, double train_fraction, uint64_t seed,
                             rha_dataset** train_out, rha_dataset** test_out);

/* Scales y by s and c by s^2 so that the total cost reaches 1. */
RHA_API rha_status rha_rescale_for_scaling(const rha_dataset* ds, rha_dataset** out,
                                           double* scale_out);

/* ---- objective ---- */

typedef struct rha_condition_report {
  double gamma_min;
  double lambda_required;
  double max_sq_norm;
  double total_cost;
  int submodular_holds;
  int strict_decrease_holds;
  int scaling_holds;
  int has_alpha_star;
  double alpha_star;
} rha_condition_report;

RHA_API rha_status rha_check_conditions(const rha_dataset* ds, double lambda,
                                        rha_condition_report* out);
RHA_API rha_status rha_loss(const rha_dataset* ds, const size_t* human, size_t count,
                            double lambda, double* out);

/* ---- selection ---- */

typedef enum rha_algorithm {
  RHA_ALGO_GREEDY = 0,
  RHA_ALGO_DS = 1,
  RHA_ALGO_TRIAGE = 2,
  RHA_ALGO_RANDOM = 3,
  RHA_ALGO_EXHAUSTIVE = 4
} rha_algorithm;

RHA_API rha_status rha_algorithm_from_name(const char* name, rha_algorithm* out);
RHA_API const char* rha_algorithm_name(rha_algorithm algo);

/* seed is used by the random selector only. */
RHA_API rha_status rha_select(const rha_dataset* ds, rha_algorithm algo, double lambda,
                              size_t budget, uint64_t seed, rha_selection** out);
RHA_API void rha_selection_free(rha_selection* sel);

RHA_API size_t rha_selection_size(const rha_selection* sel);
/* Copies min(size, capacity) indices in selection order. */
RHA_API size_t rha_selection_indices(const rha_selection* sel, size_t* out, size_t capacity);
/* Returns 0 when the machine set is empty (no weights). */
RHA_API int rha_selection_weights(const rha_selection* sel, double* out, size_t capacity);
RHA_API double rha_selection_loss(const rha_selection* sel);
RHA_API double rha_selection_neg_log_loss(const rha_selection* sel);

typedef struct rha_trace_step {
  size_t step;
  size_t chosen;
  double marginal_gain;
  double loss_after;
} rha_trace_step;

RHA_API size_t rha_selection_trace_length(const rha_selection* sel);
RHA_API rha_status rha_selection_trace_step(const rha_selection* sel, size_t i,
                                            rha_trace_step* out);

/* ---- deferral ---- */

typedef struct rha_eval_report {
  size_t n_test;
  size_t n_deferred;
  double deferral_rate;
  double machine_mse;
  double human_cost_mean;
  double overall_mse;
} rha_eval_report;

RHA_API rha_status rha_evaluate(const rha_dataset* test, const rha_dataset* train,
                                const rha_selection* sel, rha_eval_report* out);

/* ---- certificate ---- */

typedef struct rha_certificate {
  rha_condition_report conditions;
  int applicable;
  double greedy_neg_log_loss;
  double optimal_neg_log_loss;
  double greedy_gain; /* ln l(empty) - ln l(S) */
  double optimal_gain;
  double alpha;
  double threshold;
  int pass;
  char reason[160]; /* empty when applicable */
} rha_certificate;

RHA_API rha_status rha_certify(const rha_dataset* ds, double lambda, size_t budget,
                               rha_certificate* out);

/* ---- sweeps ---- */

RHA_API rha_status rha_sweep_config_create(rha_sweep_config** out);
RHA_API void rha_sweep_config_free(rha_sweep_config* cfg);

RHA_API rha_status rha_sweep_set_synthetic(rha_sweep_config* cfg,
                                           const rha_synthetic_config* data);
RHA_API rha_status rha_sweep_set_input(rha_sweep_config* cfg, const char* path, int annotator);
RHA_API rha_status rha_sweep_set_lambda(rha_sweep_config* cfg, double lambda);
RHA_API rha_status rha_sweep_set_budgets(rha_sweep_config* cfg, const size_t* budgets,
                                         size_t count);
RHA_API rha_status rha_sweep_set_algorithms(rha_sweep_config* cfg, const rha_algorithm* algos,
                                            size_t count);
RHA_API rha_status rha_sweep_set_seeds(rha_sweep_config* cfg, const uint64_t* seeds,
                                       size_t count);
RHA_API rha_status rha_sweep_set_train_fraction(rha_sweep_config* cfg, double fraction);
RHA_API rha_status rha_sweep_set_human_model(rha_sweep_config* cfg, const rha_human_model* model);
RHA_API rha_status rha_sweep_set_output_dir(rha_sweep_config* cfg, const char* dir);
RHA_API rha_status rha_sweep_set_jobs(rha_sweep_config* cfg, unsigned jobs);
RHA_API rha_status rha_sweep_set_flags(rha_sweep_config* cfg, int timing, int audit,
                                       int write_traces, int sample_human_predictions);
RHA_API rha_status rha_sweep_set_ds_max_iters(rha_sweep_config* cfg, size_t iters);

/* Runs the sweep, writing results.csv and traces/ under the output
 * directory. rows_out, if not NULL, receives the number of results rows. */
RHA_API rha_status rha_sweep_run(const rha_sweep_config* cfg, size_t* rows_out);

#ifdef __cplusplus
}
#endif

#endif /* RHA_RHA_H */
