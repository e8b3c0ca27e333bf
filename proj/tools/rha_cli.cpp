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

// rha: command line front end over the C API.
//
//   rha gen      synthetic dataset CSV
//   rha sweep    selection + deferral sweep, results and traces
//   rha diag     precondition report for a dataset
//   rha certify  greedy vs exhaustive with the curvature certificate
//   rha rescale  scale y and c so the total human cost reaches 1
//
// Every subcommand also takes --config FILE with key=value lines whose keys
// are the long flag names; flags given on the command line win.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rha/rha.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitCap = 4;

struct DatasetDeleter {
  void operator()(rha_dataset* d) const { rha_dataset_free(d); }
};
using DatasetPtr = std::unique_ptr<rha_dataset, DatasetDeleter>;

struct SweepDeleter {
  void operator()(rha_sweep_config* c) const { rha_sweep_config_free(c); }
};

int exit_code(rha_status st) {
  switch (st) {
    case RHA_OK: return kExitOk;
    case RHA_ERR_INVALID_ARGUMENT: return kExitUsage;
    case RHA_ERR_CAP: return kExitCap;
    default: return kExitData;
  }
}

// Thrown from handlers to unwind with an exit code after printing.
struct Exit {
  int code;
};

void check(rha_status st) {
  if (st == RHA_OK) return;
  std::fprintf(stderr, "rha: %s: %s\n", rha_status_name(st), rha_last_error());
  throw Exit{exit_code(st)};
}

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* ok(int flag) { return flag ? "OK" : "FAIL"; }

// ---- config files ----

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool given(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Splices key=value lines from --config into the argument list, right after
// the subcommand, skipping keys already present on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;

  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "rha: cannot read config file '%s': %s\n", path.c_str(),
                 std::strerror(errno));
    throw Exit{kExitUsage};
  }
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(line.substr(0, eq));
    if (key.empty() || key == "config") {
      std::fprintf(stderr, "rha: %s:%d: expected key=value\n", path.c_str(), line_no);
      throw Exit{kExitUsage};
    }
    if (given(args, key)) continue;
    extra.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

// ---- shared option groups ----

struct SyntheticOpts {
  std::size_t dim = 5;
  std::size_t n_samples = 500;
  std::string response = "gaussian";
  double sigma1 = 0.1;
  double sigma2 = 1e-3;
};

void add_synthetic(CLI::App* sub, SyntheticOpts& o) {
  sub->add_option("--d", o.dim, "feature dimension")->check(CLI::PositiveNumber);
  sub->add_option("--n-samples", o.n_samples, "number of samples")->check(CLI::Range(2, 1 << 30));
  sub->add_option("--response", o.response, "gaussian or logistic")
      ->check(CLI::IsMember({"gaussian", "logistic"}));
  sub->add_option("--sigma1", o.sigma1, "response noise (gaussian)")->check(CLI::NonNegativeNumber);
  sub->add_option("--sigma2", o.sigma2, "human error scale")->check(CLI::NonNegativeNumber);
}

rha_synthetic_config to_config(const SyntheticOpts& o, std::uint64_t seed) {
  rha_synthetic_config c;
  rha_synthetic_config_init(&c);
  c.dim = o.dim;
  c.n_samples = o.n_samples;
  check(rha_response_from_name(o.response.c_str(), &c.response));
  c.sigma1 = o.sigma1;
  c.sigma2 = o.sigma2;
  c.seed = seed;
  return c;
}

struct HumanOpts {
  std::string kind = "none";
  double sigma2 = 1e-3;
  int scale_points = 5;
  double p = 0.9;
  double rho_c = 0.5;
  double c_low = 1e-4;
  double c_high = 0.5;
};

void add_human(CLI::App* sub, HumanOpts& o, bool with_sigma2) {
  sub->add_option("--human", o.kind, "human error model: none, gaussian, categorical, bimodal")
      ->check(CLI::IsMember({"none", "gaussian", "categorical", "bimodal"}));
  if (with_sigma2) {
    sub->add_option("--human-sigma2", o.sigma2, "gaussian human error scale")
        ->check(CLI::NonNegativeNumber);
  }
  sub->add_option("--scale-points", o.scale_points, "categorical scale size")
      ->check(CLI::Range(2, 1000));
  sub->add_option("--p", o.p, "categorical probability of the true score")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--rho-c", o.rho_c, "bimodal fraction of low-cost samples")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--c-low", o.c_low, "bimodal low cost")->check(CLI::NonNegativeNumber);
  sub->add_option("--c-high", o.c_high, "bimodal high cost")->check(CLI::NonNegativeNumber);
}

rha_human_model to_model(const HumanOpts& o) {
  rha_human_model m;
  rha_human_model_init(&m);
  if (o.kind == "gaussian") m.kind = RHA_HUMAN_GAUSSIAN;
  if (o.kind == "categorical") m.kind = RHA_HUMAN_CATEGORICAL;
  if (o.kind == "bimodal") m.kind = RHA_HUMAN_BIMODAL;
  m.sigma2 = o.sigma2;
  m.scale_points = o.scale_points;
  m.p = o.p;
  m.rho_c = o.rho_c;
  m.c_low = o.c_low;
  m.c_high = o.c_high;
  return m;
}

DatasetPtr load(const std::string& path, bool annotator) {
  rha_dataset* ds = nullptr;
  check(annotator ? rha_dataset_read_annotator_csv(path.c_str(), &ds)
                  : rha_dataset_read_csv(path.c_str(), &ds));
  return DatasetPtr(ds);
}

std::string alpha_reason(const rha_condition_report& r) {
  if (!r.submodular_holds) return "human error or lambda bound fails";
  if (!r.scaling_holds) return "total human cost below 1, run rescale first";
  return "curvature bound undefined for this dataset";
}

void print_conditions(const rha_condition_report& r, double lambda) {
  std::printf("lambda %s\n", real(lambda).c_str());
  std::printf("gamma_min %s\n", real(r.gamma_min).c_str());
  std::printf("lambda_required %s\n", real(r.lambda_required).c_str());
  std::printf("max_sq_norm %s\n", real(r.max_sq_norm).c_str());
  std::printf("total_cost %s\n", real(r.total_cost).c_str());
  std::printf("submodular %s\n", ok(r.submodular_holds));
  std::printf("strict_decrease %s\n", ok(r.strict_decrease_holds));
  std::printf("scaling %s\n", ok(r.scaling_holds));
  if (r.has_alpha_star) {
    std::printf("alpha_star %s\n", real(r.alpha_star).c_str());
  } else {
    std::printf("alpha_star unavailable (%s)\n", alpha_reason(r).c_str());
  }
}

// ---- subcommands ----

struct GenArgs {
  SyntheticOpts syn;
  HumanOpts human;
  std::uint64_t seed = 0;
  std::string out;
  double lambda = 5e-3;
};

void run_gen(const GenArgs& a) {
  rha_dataset* raw = nullptr;
  const auto cfg = to_config(a.syn, a.seed);
  check(rha_generate_synthetic(&cfg, &raw));
  DatasetPtr ds(raw);
  const auto model = to_model(a.human);
  if (model.kind != RHA_HUMAN_NONE) {
    check(rha_apply_human_model(ds.get(), &model, a.seed, &raw));
    ds.reset(raw);
  }
  check(rha_dataset_write_csv(ds.get(), a.out.c_str()));
  rha_condition_report rep;
  check(rha_check_conditions(ds.get(), a.lambda, &rep));
  std::printf("wrote %zu samples to %s\n", rha_dataset_size(ds.get()), a.out.c_str());
  print_conditions(rep, a.lambda);
}

struct SweepArgs {
  std::string input;
  bool annotator = false;
  SyntheticOpts syn;
  HumanOpts human;
  double lambda = 5e-3;
  std::vector<std::size_t> budgets;
  std::vector<std::string> algorithms{"greedy"};
  std::vector<std::uint64_t> seeds{0};
  double train_fraction = 0.8;
  std::string out;
  unsigned jobs = 1;
  bool timing = false;
  bool audit = false;
  bool no_traces = false;
  bool sample_human = false;
  std::size_t ds_max_iters = 50;
};

void run_sweep(const SweepArgs& a) {
  rha_sweep_config* raw = nullptr;
  check(rha_sweep_config_create(&raw));
  std::unique_ptr<rha_sweep_config, SweepDeleter> cfg(raw);
  if (!a.input.empty()) {
    check(rha_sweep_set_input(cfg.get(), a.input.c_str(), a.annotator));
  } else {
    const auto syn = to_config(a.syn, 0);
    check(rha_sweep_set_synthetic(cfg.get(), &syn));
  }
  std::vector<rha_algorithm> algos;
  for (const auto& name : a.algorithms) {
    rha_algorithm al;
    check(rha_algorithm_from_name(name.c_str(), &al));
    algos.push_back(al);
  }
  const auto model = to_model(a.human);
  check(rha_sweep_set_lambda(cfg.get(), a.lambda));
  check(rha_sweep_set_budgets(cfg.get(), a.budgets.data(), a.budgets.size()));
  check(rha_sweep_set_algorithms(cfg.get(), algos.data(), algos.size()));
  check(rha_sweep_set_seeds(cfg.get(), a.seeds.data(), a.seeds.size()));
  check(rha_sweep_set_train_fraction(cfg.get(), a.train_fraction));
  check(rha_sweep_set_human_model(cfg.get(), &model));
  check(rha_sweep_set_output_dir(cfg.get(), a.out.c_str()));
  check(rha_sweep_set_jobs(cfg.get(), a.jobs));
  check(rha_sweep_set_flags(cfg.get(), a.timing, a.audit, !a.no_traces, a.sample_human));
  check(rha_sweep_set_ds_max_iters(cfg.get(), a.ds_max_iters));
  std::size_t rows = 0;
  check(rha_sweep_run(cfg.get(), &rows));
  std::printf("wrote %zu rows to %s/results.csv\n", rows, a.out.c_str());
}

struct DiagArgs {
  std::string input;
  bool annotator = false;
  double lambda = 0.0;
  bool json = false;
};

nlohmann::json number(double v) {
  // JSON has no infinities; a string keeps the value visible.
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

void run_diag(const DiagArgs& a) {
  const auto ds = load(a.input, a.annotator);
  rha_condition_report r;
  check(rha_check_conditions(ds.get(), a.lambda, &r));
  if (a.json) {
    nlohmann::json j;
    j["n_samples"] = rha_dataset_size(ds.get());
    j["dim"] = rha_dataset_dim(ds.get());
    j["lambda"] = a.lambda;
    j["gamma_min"] = number(r.gamma_min);
    j["lambda_required"] = number(r.lambda_required);
    j["max_sq_norm"] = r.max_sq_norm;
    j["total_cost"] = r.total_cost;
    j["submodular_holds"] = r.submodular_holds != 0;
    j["strict_decrease_holds"] = r.strict_decrease_holds != 0;
    j["scaling_holds"] = r.scaling_holds != 0;
    if (r.has_alpha_star) {
      j["alpha_star"] = r.alpha_star;
    } else {
      j["alpha_star"] = nullptr;
      j["alpha_star_reason"] = alpha_reason(r);
    }
    std::printf("%s\n", j.dump(2).c_str());
    return;
  }
  std::printf("n_samples %zu\n", rha_dataset_size(ds.get()));
  std::printf("dim %zu\n", rha_dataset_dim(ds.get()));
  print_conditions(r, a.lambda);
}

struct CertifyArgs {
  std::string input;
  bool annotator = false;
  double lambda = 0.0;
  std::size_t n = 0;
};

void run_certify(const CertifyArgs& a) {
  const auto ds = load(a.input, a.annotator);
  rha_certificate c;
  check(rha_certify(ds.get(), a.lambda, a.n, &c));
  std::printf("greedy_neg_log_loss %s\n", real(c.greedy_neg_log_loss).c_str());
  std::printf("optimal_neg_log_loss %s\n", real(c.optimal_neg_log_loss).c_str());
  std::printf("greedy_gain %s\n", real(c.greedy_gain).c_str());
  std::printf("optimal_gain %s\n", real(c.optimal_gain).c_str());
  if (!c.applicable) {
    std::printf("bound not applicable: %s\n", c.reason);
    return;
  }
  std::printf("alpha_star %s\n", real(c.alpha).c_str());
  std::printf("threshold %s\n", real(c.threshold).c_str());
  std::printf("%s\n", c.pass ? "PASS" : "FAIL");
}

struct RescaleArgs {
  std::string input;
  bool annotator = false;
  std::string out;
};

void run_rescale(const RescaleArgs& a) {
  const auto ds = load(a.input, a.annotator);
  rha_dataset* raw = nullptr;
  double scale = 1.0;
  check(rha_rescale_for_scaling(ds.get(), &raw, &scale));
  DatasetPtr scaled(raw);
  check(rha_dataset_write_csv(scaled.get(), a.out.c_str()));
  rha_condition_report r;
  // lambda only enters the other fields; total_cost is what matters here.
  check(rha_check_conditions(scaled.get(), 1.0, &r));
  std::printf("scale %s\n", real(scale).c_str());
  std::printf("total_cost %s\n", real(r.total_cost).c_str());
}

void add_config(CLI::App* sub) {
  // Consumed by expand_config before parsing.
  sub->add_option("--config", "key=value file with long flag names as keys");
}

int run(int argc, char** argv) {
  CLI::App app{"Ridge regression under human assistance"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "write a synthetic dataset CSV");
  add_synthetic(g, gen.syn);
  add_human(g, gen.human, false);
  g->add_option("--seed", gen.seed, "master seed");
  g->add_option("--out", gen.out, "output CSV")->required();
  g->add_option("--lambda", gen.lambda, "lambda for the printed report")
      ->check(CLI::PositiveNumber);
  add_config(g);

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "run selection sweeps and write results.csv");
  auto* in = s->add_option("--input", sw.input, "dataset CSV (default: synthetic data)");
  s->add_flag("--annotator", sw.annotator, "input is an annotator score CSV")->needs(in);
  add_synthetic(s, sw.syn);
  add_human(s, sw.human, true);
  s->add_option("--lambda", sw.lambda, "ridge penalty")->check(CLI::PositiveNumber);
  s->add_option("--budgets", sw.budgets, "budget grid, comma separated")
      ->delimiter(',')
      ->required();
  s->add_option("--algorithms", sw.algorithms, "greedy, ds, triage, random, exhaustive")
      ->delimiter(',')
      ->check(CLI::IsMember({"greedy", "ds", "triage", "random", "exhaustive"}));
  s->add_option("--seeds", sw.seeds, "seeds, comma separated")->delimiter(',');
  s->add_option("--train-fraction", sw.train_fraction, "train share of each split")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--out", sw.out, "output directory")->required();
  s->add_option("--jobs", sw.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  s->add_flag("--timing", sw.timing, "record wall_ms (rows then vary between runs)");
  s->add_flag("--audit", sw.audit, "recheck each train_loss against a batch evaluation");
  s->add_flag("--no-traces", sw.no_traces, "skip per-run trace files");
  s->add_flag("--sample-human", sw.sample_human,
              "score deferred samples with sampled human predictions");
  s->add_option("--ds-max-iters", sw.ds_max_iters, "iteration cap for ds")
      ->check(CLI::PositiveNumber);
  add_config(s);

  DiagArgs dg;
  auto* d = app.add_subcommand("diag", "report preconditions for a dataset");
  auto* din = d->add_option("--input", dg.input, "dataset CSV")->required();
  d->add_flag("--annotator", dg.annotator, "input is an annotator score CSV")->needs(din);
  d->add_option("--lambda", dg.lambda, "ridge penalty")->required()->check(CLI::PositiveNumber);
  d->add_flag("--json", dg.json, "machine-readable output");
  add_config(d);

  CertifyArgs ct;
  auto* c = app.add_subcommand("certify", "greedy against the exhaustive optimum");
  c->add_option("--input", ct.input, "dataset CSV")->required();
  c->add_flag("--annotator", ct.annotator, "input is an annotator score CSV");
  c->add_option("--lambda", ct.lambda, "ridge penalty")->required()->check(CLI::PositiveNumber);
  c->add_option("--n", ct.n, "budget")->required();
  add_config(c);

  RescaleArgs rs;
  auto* r = app.add_subcommand("rescale", "scale y and c so that the total cost reaches 1");
  r->add_option("--input", rs.input, "dataset CSV")->required();
  r->add_flag("--annotator", rs.annotator, "input is an annotator score CSV");
  r->add_option("--out", rs.out, "output CSV")->required();
  add_config(r);

  std::vector<std::string> args(argv, argv + argc);
  args = expand_config(args);
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (g->parsed()) run_gen(gen);
  if (s->parsed()) run_sweep(sw);
  if (d->parsed()) run_diag(dg);
  if (c->parsed()) run_certify(ct);
  if (r->parsed()) run_rescale(rs);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rha: %s\n", e.what());
    return kExitData;
  }
}
