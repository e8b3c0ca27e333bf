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

#include "rha/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rha/error.hpp"

namespace rha {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

std::vector<char> human_mask(const Dataset& ds, std::span<const std::size_t> human) {
  std::vector<char> mask(ds.size(), 0);
  for (std::size_t k : human) {
    if (k >= ds.size()) {
      throw Error(ErrorCode::kInvalidArgument, "sample index " + std::to_string(k) +
                                                   " out of range for N = " +
                                                   std::to_string(ds.size()));
    }
    if (mask[k]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample index " + std::to_string(k) + " repeated in human set");
    }
    mask[k] = 1;
  }
  return mask;
}

// Statistics over an explicit (small) machine set.
MachineStats stats_of_machine(const Dataset& ds, std::span<const std::size_t> machine,
                              double total_cost) {
  MachineStats st;
  st.gram = linalg::SymMatrix(ds.dim());
  st.moment.assign(ds.dim(), 0.0);
  st.cost_sum = total_cost;
  for (std::size_t i : machine) {
    auto x = ds.x(i);
    st.gram.add_outer(x);
    for (std::size_t j = 0; j < ds.dim(); ++j) st.moment[j] += ds.y(i) * x[j];
    st.yy += ds.y(i) * ds.y(i);
    st.cost_sum -= ds.cost(i);
  }
  st.cost_sum = std::max(0.0, st.cost_sum);
  st.machine_count = machine.size();
  return st;
}

linalg::SymMatrix block_matrix(const MachineStats& st, double lambda) {
  const std::size_t d = st.gram.dim();
  linalg::SymMatrix m(d + 1);
  m.set(0, 0, st.cost_sum + st.yy);
  for (std::size_t j = 0; j < d; ++j) m.set(0, j + 1, st.moment[j]);
  const double ridge = lambda * static_cast<double>(st.machine_count);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      m.set(i + 1, j + 1, st.gram(i, j) + (i == j ? ridge : 0.0));
    }
  }
  return m;
}

double f_of_stats(const MachineStats& st, double lambda) {
  return linalg::logdet(linalg::chol_factor(block_matrix(st, lambda)));
}

double g_of_stats(const MachineStats& st, double lambda) {
  return linalg::logdet(linalg::chol_factor(ridge_matrix(st, lambda)));
}

double loss_of_stats(const MachineStats& st, const linalg::SpdFactor& a) {
  const auto w = linalg::spd_solve(a, st.moment);
  return std::max(0.0, st.cost_sum + st.yy - linalg::dot(st.moment, w));
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be a positive finite number");
  }
}

bool is_full_set(const Dataset& ds, std::span<const std::size_t> human) {
  return human.size() == ds.size();
}

}  // namespace

MachineStats machine_stats(const Dataset& ds, std::span<const std::size_t> human) {
  const auto mask = human_mask(ds, human);
  MachineStats st;
  st.gram = linalg::SymMatrix(ds.dim());
  st.moment.assign(ds.dim(), 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (mask[i]) {
      st.cost_sum += ds.cost(i);
      continue;
    }
    auto x = ds.x(i);
    st.gram.add_outer(x);
    for (std::size_t j = 0; j < ds.dim(); ++j) st.moment[j] += ds.y(i) * x[j];
    st.yy += ds.y(i) * ds.y(i);
    ++st.machine_count;
  }
  return st;
}

linalg::SymMatrix ridge_matrix(const MachineStats& st, double lambda) {
  linalg::SymMatrix a = st.gram;
  a.add_diagonal(lambda * static_cast<double>(st.machine_count));
  return a;
}

linalg::Vector ridge_weights(const Dataset& ds, std::span<const std::size_t> human,
                             double lambda) {
  require_lambda(lambda);
  const auto st = machine_stats(ds, human);
  if (st.machine_count == 0) {
    throw Error(ErrorCode::kEmptyMachineSet, "w* is undefined when every sample is human");
  }
  return linalg::spd_solve(linalg::chol_factor(ridge_matrix(st, lambda)), st.moment);
}

double loss(const Dataset& ds, std::span<const std::size_t> human, double lambda) {
  require_lambda(lambda);
  const auto st = machine_stats(ds, human);
  if (st.machine_count == 0) return st.cost_sum;
  return loss_of_stats(st, linalg::chol_factor(ridge_matrix(st, lambda)));
}

FullSetValues full_set_values(const Dataset& ds, double lambda) {
  require_lambda(lambda);
  require_ground_set(ds);
  const std::size_t n = ds.size();
  const double total = ds.total_cost();
  const double log_total = safe_log(total);

  std::vector<double> f1(n), g1(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t machine[] = {k};
    const auto st = stats_of_machine(ds, machine, total);
    f1[k] = f_of_stats(st, lambda);
    g1[k] = g_of_stats(st, lambda);
  }
  FullSetValues out{kInf, kInf};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t machine[] = {a, b};
      const auto st = stats_of_machine(ds, machine, total);
      const double f_pair = f1[a] + f1[b] - f_of_stats(st, lambda);
      const double g_pair = g1[a] + g1[b] - g_of_stats(st, lambda);
      out.f = std::min({out.f, f_pair, g_pair + log_total});
      out.g = std::min({out.g, f_pair - log_total, g_pair});
    }
  }
  return out;
}

double f_value(const Dataset& ds, std::span<const std::size_t> human, double lambda) {
  require_lambda(lambda);
  if (is_full_set(ds, human)) {
    human_mask(ds, human);
    return full_set_values(ds, lambda).f;
  }
  return f_of_stats(machine_stats(ds, human), lambda);
}

double g_value(const Dataset& ds, std::span<const std::size_t> human, double lambda) {
  require_lambda(lambda);
  if (is_full_set(ds, human)) {
    human_mask(ds, human);
    return full_set_values(ds, lambda).g;
  }
  return g_of_stats(machine_stats(ds, human), lambda);
}

// ---------------------------------------------------------------------------

ObjectiveState init_state(const Dataset& ds, double lambda) {
  require_lambda(lambda);
  require_ground_set(ds);
  ObjectiveState st;
  st.ds_ = &ds;
  st.lambda_ = lambda;
  st.mask_.assign(ds.size(), 0);
  st.stats_ = machine_stats(ds, {});
  st.factor_ = linalg::chol_factor(ridge_matrix(st.stats_, lambda));
  return st;
}

ObjectiveState with_human(const ObjectiveState& st, std::size_t k) {
  const Dataset& ds = *st.ds_;
  if (k >= ds.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sample index " + std::to_string(k) + " out of range");
  }
  if (st.mask_[k]) {
    throw Error(ErrorCode::kAlreadyHuman, "sample " + ds.id(k) + " is already outsourced");
  }
  ObjectiveState next = st;
  next.human_.push_back(k);
  next.mask_[k] = 1;
  MachineStats& s = next.stats_;
  auto x = ds.x(k);
  const double y = ds.y(k);
  s.cost_sum += ds.cost(k);
  s.yy -= y * y;
  for (std::size_t j = 0; j < ds.dim(); ++j) s.moment[j] -= y * x[j];
  s.gram.add_outer(x, -1.0);
  s.machine_count -= 1;
  if (s.machine_count == 0) {
    next.factor_.reset();
  } else {
    next.factor_ = linalg::chol_factor(ridge_matrix(s, st.lambda_));
  }
  return next;
}

double ObjectiveState::loss() const {
  if (stats_.machine_count == 0) return stats_.cost_sum;
  return loss_of_stats(stats_, *factor_);
}

double ObjectiveState::f() const {
  if (stats_.machine_count == 0) return full_set_values(*ds_, lambda_).f;
  return f_of_stats(stats_, lambda_);
}

double ObjectiveState::g() const {
  if (stats_.machine_count == 0) return full_set_values(*ds_, lambda_).g;
  return linalg::logdet(*factor_);
}

GainScan::GainScan(const ObjectiveState& st) : st_(&st), base_log_loss_(safe_log(st.loss())) {
  if (st.machine_count() >= 2) {
    const auto& s = st.stats();
    linalg::SymMatrix reduced = s.gram;
    reduced.add_diagonal(st.lambda() * static_cast<double>(s.machine_count - 1));
    reduced_ = linalg::chol_factor(reduced);
  }
}

double GainScan::loss_with(std::size_t k) const {
  const ObjectiveState& st = *st_;
  const Dataset& ds = st.dataset();
  if (k >= ds.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sample index " + std::to_string(k) + " out of range");
  }
  if (st.is_human(k)) {
    throw Error(ErrorCode::kAlreadyHuman, "sample " + ds.id(k) + " is already outsourced");
  }
  const auto& s = st.stats();
  const double cost = s.cost_sum + ds.cost(k);
  if (s.machine_count == 1) return cost;

  auto x = ds.x(k);
  const double y = ds.y(k);
  linalg::Vector v = s.moment;
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= y * x[j];
  const double yy = s.yy - y * y;

  auto solved = linalg::try_sm_downdate_solve(*reduced_, x, v);
  if (!solved) {
    ++fallbacks_;
    linalg::SymMatrix a = s.gram;
    a.add_outer(x, -1.0);
    a.add_diagonal(st.lambda() * static_cast<double>(s.machine_count - 1));
    solved = linalg::spd_solve(linalg::chol_factor(a), v);
  }
  return std::max(0.0, cost + yy - linalg::dot(v, *solved));
}

double GainScan::gain(std::size_t k) const {
  return base_log_loss_ - safe_log(loss_with(k));
}

double marginal_gain(const ObjectiveState& st, std::size_t k) {
  return GainScan(st).gain(k);
}

// ---------------------------------------------------------------------------

namespace {

ConditionReport basic_conditions(const Dataset& ds, double lambda) {
  ConditionReport r;
  bool all_nonzero_y = true;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const double c = ds.cost(k);
    const double y2 = ds.y(k) * ds.y(k);
    if (y2 == 0.0) all_nonzero_y = false;
    double ratio = 0.0;
    if (c > 0.0) ratio = y2 > 0.0 ? c / y2 : kInf;
    r.gamma_min = std::max(r.gamma_min, ratio);
  }
  r.max_sq_norm = ds.max_sq_norm();
  r.total_cost = ds.total_cost();
  if (r.gamma_min < 1.0) {
    r.lambda_required = r.gamma_min / (1.0 - r.gamma_min) * r.max_sq_norm;
  } else {
    r.lambda_required = kInf;
  }
  r.submodular_holds = r.gamma_min < 1.0 && lambda >= r.lambda_required;
  // A gamma strictly above gamma_min exists with lambda above its bound iff
  // the bound at gamma_min holds strictly; c_k < gamma y_k^2 needs y_k != 0.
  r.strict_decrease_holds = all_nonzero_y && r.gamma_min < 1.0 && lambda > r.lambda_required;
  r.scaling_holds = r.total_cost >= 1.0;
  return r;
}

}  // namespace

ConditionReport check_conditions(const Dataset& ds, double lambda) {
  ConditionReport r = basic_conditions(ds, lambda);
  if (r.submodular_holds && r.scaling_holds && lambda > 0.0 && ds.size() >= 2) {
    try {
      r.alpha_star = alpha_star(ds, lambda);
    } catch (const Error&) {
      r.alpha_star.reset();
    }
  }
  return r;
}

Rescaled rescale_for_scaling(const Dataset& ds) {
  const double total = ds.total_cost();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kAllZeroCosts, "every human cost is zero; sum c >= 1 is unattainable");
  }
  const double s = std::max(1.0, std::sqrt(1.000001 / total));
  if (s == 1.0) return {ds, 1.0};
  std::vector<double> y(ds.responses().begin(), ds.responses().end());
  std::vector<double> c(ds.costs().begin(), ds.costs().end());
  for (double& v : y) v *= s;
  for (double& v : c) v *= s * s;
  return {ds.with_responses(std::move(y)).with_costs(std::move(c)), s};
}

double alpha_star(const Dataset& ds, double lambda) {
  require_lambda(lambda);
  require_ground_set(ds);
  const auto cond = basic_conditions(ds, lambda);
  if (!cond.submodular_holds || !cond.scaling_holds) {
    throw Error(ErrorCode::kHypothesisViolated,
                "alpha* needs gamma_min < 1, lambda >= lambda_required and sum c >= 1");
  }
  const std::size_t n = ds.size();
  const double total = ds.total_cost();
  const double loss_empty = loss(ds, {}, lambda);
  const double loss_full = total;

  // Machine set {k} is V \ k; machine set {k1, k2} is V \ {k1, k2}.
  std::vector<double> loss_drop(n), f_drop(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t machine[] = {k};
    const auto st = stats_of_machine(ds, machine, total);
    loss_drop[k] = loss_of_stats(st, linalg::chol_factor(ridge_matrix(st, lambda)));
    f_drop[k] = f_of_stats(st, lambda);
  }
  double min_step = kInf;
  double max_log_step = -kInf;
  for (std::size_t k = 0; k < n; ++k) {
    min_step = std::min(min_step, loss_drop[k] - loss_full);
    max_log_step = std::max(max_log_step, safe_log(loss_drop[k]) - safe_log(loss_full));
  }
  double max_f_step = -kInf;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t machine[] = {a, b};
      const double f_pair = f_of_stats(stats_of_machine(ds, machine, total), lambda);
      // Ordered pairs: f(V \ {k1,k2}) - f(V \ k1) for k1 = a and k1 = b.
      max_f_step = std::max({max_f_step, f_pair - f_drop[a], f_pair - f_drop[b]});
    }
  }

  if (!(loss_empty > 1.0)) {
    throw Error(ErrorCode::kHypothesisViolated, "l(empty) must exceed 1 for the curvature ratio");
  }
  const double kappa = safe_log(loss_empty - min_step) / std::log(loss_empty);
  const double numer = (1.0 - kappa) * std::log(loss_full);
  auto ratio = [numer](double denom) { return denom > 0.0 ? numer / denom : kInf; };
  const double best = std::min(ratio(max_f_step), ratio(max_log_step));
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::kHypothesisViolated, "both curvature denominators vanish");
  }
  return 1.0 - best;
}

double single_sample_machine_error(const Dataset& ds, std::size_t k, double lambda) {
  require_lambda(lambda);
  const double norm2 = linalg::dot(ds.x(k), ds.x(k));
  const double shrink = lambda / (lambda + norm2);
  return ds.y(k) * ds.y(k) * shrink * shrink;
}

}  // namespace rha
