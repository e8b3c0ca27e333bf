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

#include "rha/linalg.hpp"

#include <cmath>
#include <string>

#include "rha/error.hpp"

namespace rha::linalg {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  m.add_diagonal(1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * m.dim_ + i] = diag[i];
  return m;
}

SymMatrix SymMatrix::from_row_major(std::size_t dim, std::span<const double> entries) {
  if (dim == 0 || entries.size() != dim * dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(dim * dim) + " entries, got " +
                    std::to_string(entries.size()));
  }
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double aij = entries[i * dim + j];
      const double aji = entries[j * dim + i];
      if (!std::isfinite(aij)) {
        throw Error(ErrorCode::kInvalidArgument, "matrix entry is not finite");
      }
      if (std::abs(aij - aji) > 1e-12 * (1.0 + std::abs(aij))) {
        throw Error(ErrorCode::kInvalidArgument, "matrix is not symmetric");
      }
      m.data_[i * dim + j] = aij;
    }
  }
  return m;
}

void SymMatrix::add_diagonal(double v) {
  for (std::size_t i = 0; i < dim_; ++i) data_[i * dim_ + i] += v;
}

void SymMatrix::add_outer(std::span<const double> x, double scale) {
  for (std::size_t i = 0; i < dim_; ++i) {
    const double xi = scale * x[i];
    double* row = &data_[i * dim_];
    for (std::size_t j = 0; j < dim_; ++j) row[j] += xi * x[j];
  }
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

Vector SymMatrix::multiply(std::span<const double> v) const {
  Vector out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = dot(std::span<const double>(&data_[i * dim_], dim_), v);
  }
  return out;
}

void SpdFactor::forward(std::span<double> v) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = v[i];
    const double* row = &lower_[i * dim_];
    for (std::size_t k = 0; k < i; ++k) s -= row[k] * v[k];
    v[i] = s / row[i];
  }
}

void SpdFactor::backward(std::span<double> v) const {
  for (std::size_t i = dim_; i-- > 0;) {
    double s = v[i];
    for (std::size_t k = i + 1; k < dim_; ++k) s -= lower_[k * dim_ + i] * v[k];
    v[i] = s / lower_[i * dim_ + i];
  }
}

std::optional<SpdFactor> try_chol_factor(const SymMatrix& a) {
  const std::size_t d = a.dim();
  if (d == 0) return std::nullopt;
  const double pivot_floor = kSpdPivotTolerance * (a.trace() / static_cast<double>(d));
  SpdFactor f;
  f.dim_ = d;
  f.lower_.assign(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= f.lower_[j * d + k] * f.lower_[j * d + k];
    if (!(diag > pivot_floor) || !(diag > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(diag);
    f.lower_[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= f.lower_[i * d + k] * f.lower_[j * d + k];
      f.lower_[i * d + j] = s / ljj;
    }
  }
  return f;
}

SpdFactor chol_factor(const SymMatrix& a) {
  auto f = try_chol_factor(a);
  if (!f) {
    throw Error(ErrorCode::kNotSpd,
                "matrix of dimension " + std::to_string(a.dim()) + " is not positive definite");
  }
  return std::move(*f);
}

Vector spd_solve(const SpdFactor& f, std::span<const double> v) {
  if (v.size() != f.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "factor has dimension " + std::to_string(f.dim()) + ", vector has " +
                    std::to_string(v.size()));
  }
  Vector out(v.begin(), v.end());
  f.forward(out);
  f.backward(out);
  return out;
}

double logdet(const SpdFactor& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) s += std::log(f.l(i, i));
  return 2.0 * s;
}

std::optional<Vector> try_sm_downdate_solve(const SpdFactor& f, std::span<const double> x,
                                            std::span<const double> v) {
  if (x.size() != f.dim() || v.size() != f.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "downdate vector dimension mismatch");
  }
  const Vector ainv_x = spd_solve(f, x);
  Vector ainv_v = spd_solve(f, v);
  const double denom = 1.0 - dot(x, ainv_x);
  if (!(denom > kDowndateTolerance)) return std::nullopt;
  const double scale = dot(x, ainv_v) / denom;
  for (std::size_t i = 0; i < ainv_v.size(); ++i) ainv_v[i] += ainv_x[i] * scale;
  return ainv_v;
}

Vector sm_downdate_solve(const SpdFactor& f, std::span<const double> x,
                         std::span<const double> v) {
  auto out = try_sm_downdate_solve(f, x, v);
  if (!out) {
    throw Error(ErrorCode::kDowndateBreakdown, "1 - x^T A^{-1} x is not positive");
  }
  return std::move(*out);
}

}  // namespace rha::linalg
