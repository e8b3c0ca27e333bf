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

#include "rha/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "rha/error.hpp"

namespace rha {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotSpd: return "NotSpd";
    case ErrorCode::kDowndateBreakdown: return "DowndateBreakdown";
    case ErrorCode::kEmptyMachineSet: return "EmptyMachineSet";
    case ErrorCode::kAlreadyHuman: return "AlreadyHuman";
    case ErrorCode::kHypothesisViolated: return "HypothesisViolated";
    case ErrorCode::kAllZeroCosts: return "AllZeroCosts";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kBudgetTooLarge: return "BudgetTooLarge";
    case ErrorCode::kInvalidScore: return "InvalidScore";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kNoWeights: return "NoWeights";
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kAuditFailed: return "AuditFailed";
  }
  return "Unknown";
}

Dataset::Dataset(std::size_t dim, std::vector<double> features, std::vector<double> y,
                 std::vector<double> costs, std::vector<std::string> ids)
    : dim_(dim),
      features_(std::move(features)),
      y_(std::move(y)),
      costs_(std::move(costs)),
      ids_(std::move(ids)) {
  const std::size_t n = y_.size();
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "feature dimension must be positive");
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "dataset has no samples");
  if (features_.size() != n * dim_ || costs_.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "features, responses and costs disagree in size");
  }
  if (ids_.empty()) {
    ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i));
  } else if (ids_.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "ids and responses disagree in size");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(features_.begin(), features_.end(), finite) ||
      !std::all_of(y_.begin(), y_.end(), finite) ||
      !std::all_of(costs_.begin(), costs_.end(), finite)) {
    throw Error(ErrorCode::kInvalidArgument, "dataset contains non-finite values");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (costs_[i] < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "human cost of sample " + ids_[i] + " is negative");
    }
  }
}

double Dataset::total_cost() const {
  double s = 0.0;
  for (double c : costs_) s += c;
  return s;
}

double Dataset::max_sq_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0.0;
    for (double v : x(i)) s += v * v;
    best = std::max(best, s);
  }
  return best;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> f;
  std::vector<double> y;
  std::vector<double> c;
  std::vector<std::string> ids;
  f.reserve(rows.size() * dim_);
  for (std::size_t r : rows) {
    if (r >= size()) throw Error(ErrorCode::kInvalidArgument, "row index out of range");
    auto xr = x(r);
    f.insert(f.end(), xr.begin(), xr.end());
    y.push_back(y_[r]);
    c.push_back(costs_[r]);
    ids.push_back(ids_[r]);
  }
  return Dataset(dim_, std::move(f), std::move(y), std::move(c), std::move(ids));
}

Dataset Dataset::with_costs(std::vector<double> costs) const {
  return Dataset(dim_, features_, y_, std::move(costs), ids_);
}

Dataset Dataset::with_responses(std::vector<double> y) const {
  return Dataset(dim_, features_, std::move(y), costs_, ids_);
}

void require_ground_set(const Dataset& ds) {
  if (ds.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "the ground set needs at least two samples");
  }
}

}  // namespace rha
