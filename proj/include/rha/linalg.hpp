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
#include <optional>
#include <span>
#include <vector>

namespace rha::linalg {

using Vector = std::vector<double>;

// Dense symmetric matrix, row-major storage of the full square.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  // Validates symmetry (|a_ij - a_ji| <= 1e-12 (1 + |a_ij|)) and finiteness.
  static SymMatrix from_row_major(std::size_t dim, std::span<const double> entries);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const double> data() const { return data_; }

  // Builders. Keep the matrix symmetric by construction.
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }
  void add_diagonal(double v);
  // this += scale * x x^T
  void add_outer(std::span<const double> x, double scale = 1.0);

  double trace() const;
  Vector multiply(std::span<const double> v) const;

 private:
  std::size_t dim_ = 0;
  Vector data_;
};

// Lower-triangular Cholesky factor, A = L L^T with a strictly positive diagonal.
class SpdFactor {
 public:
  std::size_t dim() const { return dim_; }
  double l(std::size_t i, std::size_t j) const { return lower_[i * dim_ + j]; }

  // Solves L z = v in place.
  void forward(std::span<double> v) const;
  // Solves L^T z = v in place.
  void backward(std::span<double> v) const;

 private:
  friend SpdFactor chol_factor(const SymMatrix& a);
  friend std::optional<SpdFactor> try_chol_factor(const SymMatrix& a);
  std::size_t dim_ = 0;
  Vector lower_;
};

// Throws Error(kNotSpd) when a pivot falls to 1e-10 * trace(A)/d or below.
SpdFactor chol_factor(const SymMatrix& a);
std::optional<SpdFactor> try_chol_factor(const SymMatrix& a);

// Solves A x = v. Throws kDimensionMismatch.
Vector spd_solve(const SpdFactor& f, std::span<const double> v);

// Natural log of det(A).
double logdet(const SpdFactor& f);

// (A - x x^T)^{-1} v from the factor of A via Sherman-Morrison.
// Throws kDowndateBreakdown when 1 - x^T A^{-1} x <= 1e-12.
Vector sm_downdate_solve(const SpdFactor& f, std::span<const double> x,
                         std::span<const double> v);
std::optional<Vector> try_sm_downdate_solve(const SpdFactor& f, std::span<const double> x,
                                            std::span<const double> v);

inline constexpr double kSpdPivotTolerance = 1e-10;
inline constexpr double kDowndateTolerance = 1e-12;

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace rha::linalg
