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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rha {

// Ground set of training (or test) samples. Features are stored one sample
// per row, so row i is x_i.
class Dataset {
 public:
  Dataset() = default;
  // Validates: N >= 1, d >= 1, consistent sizes, finite values, c >= 0.
  // Ids default to "0".."N-1" when empty.
  Dataset(std::size_t dim, std::vector<double> features, std::vector<double> y,
          std::vector<double> costs, std::vector<std::string> ids = {});

  std::size_t size() const { return y_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> x(std::size_t i) const { return {&features_[i * dim_], dim_}; }
  double y(std::size_t i) const { return y_[i]; }
  double cost(std::size_t i) const { return costs_[i]; }
  const std::string& id(std::size_t i) const { return ids_[i]; }

  std::span<const double> features() const { return features_; }
  std::span<const double> responses() const { return y_; }
  std::span<const double> costs() const { return costs_; }
  const std::vector<std::string>& ids() const { return ids_; }

  double total_cost() const;
  double max_sq_norm() const;

  // New dataset holding the given rows in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset with_costs(std::vector<double> costs) const;
  Dataset with_responses(std::vector<double> y) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> features_;
  std::vector<double> y_;
  std::vector<double> costs_;
  std::vector<std::string> ids_;
};

// Training sets for the objective need at least two samples.
void require_ground_set(const Dataset& ds);

}  // namespace rha
