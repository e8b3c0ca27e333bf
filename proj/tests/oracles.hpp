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

// Independent reference implementations for the tests. Nothing here calls
// into the library's linear algebra or objective code.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rha/dataset.hpp"
#include "rha/random.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;
using Set = std::vector<std::size_t>;

// Gaussian elimination with partial pivoting.
inline Vec gauss_solve(Mat a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0) throw std::runtime_error("singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= m * a[col][k];
      b[r] -= m * b[col];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Laplace expansion along the first row. Exponential; fine up to ~8x8.
inline double cofactor_det(const Mat& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Mat minor;
    for (std::size_t r = 1; r < n; ++r) {
      Vec row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(a[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * a[0][j] * cofactor_det(minor);
  }
  return det;
}

inline bool contains(const Set& s, std::size_t k) {
  for (std::size_t v : s) {
    if (v == k) return true;
  }
  return false;
}

inline Set complement(const Set& s, std::size_t n) {
  Set out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!contains(s, i)) out.push_back(i);
  }
  return out;
}

inline Set from_mask(std::uint64_t mask, std::size_t n) {
  Set s;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1u) s.push_back(i);
  }
  return s;
}

// lambda |S^c| I + sum_{S^c} x x^T
inline Mat ridge_system(const rha::Dataset& ds, const Set& human, double lambda) {
  const std::size_t d = ds.dim();
  const Set machine = complement(human, ds.size());
  Mat a(d, Vec(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) a[i][i] = lambda * static_cast<double>(machine.size());
  for (std::size_t j : machine) {
    const auto x = ds.x(j);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a[r][c] += x[r] * x[c];
    }
  }
  return a;
}

inline Vec moment(const rha::Dataset& ds, const Set& human) {
  Vec b(ds.dim(), 0.0);
  for (std::size_t j : complement(human, ds.size())) {
    for (std::size_t r = 0; r < ds.dim(); ++r) b[r] += ds.y(j) * ds.x(j)[r];
  }
  return b;
}

inline Vec ridge_weights(const rha::Dataset& ds, const Set& human, double lambda) {
  return gauss_solve(ridge_system(ds, human, lambda), moment(ds, human));
}

// The training error written as a sum over samples, with w from elimination.
inline double direct_loss(const rha::Dataset& ds, const Set& human, double lambda) {
  double total = 0.0;
  for (std::size_t i : human) total += ds.cost(i);
  const Set machine = complement(human, ds.size());
  if (machine.empty()) return total;
  const Vec w = ridge_weights(ds, human, lambda);
  double ww = 0.0;
  for (double v : w) ww += v * v;
  for (std::size_t j : machine) {
    double pred = 0.0;
    for (std::size_t r = 0; r < ds.dim(); ++r) pred += ds.x(j)[r] * w[r];
    total += (ds.y(j) - pred) * (ds.y(j) - pred) + lambda * ww;
  }
  return total;
}

// Block matrix [[sum_S c + y^T y, b^T], [b, A]] for S != V.
inline Mat block(const rha::Dataset& ds, const Set& human, double lambda) {
  const std::size_t d = ds.dim();
  const Mat a = ridge_system(ds, human, lambda);
  const Vec b = moment(ds, human);
  double corner = 0.0;
  for (std::size_t i : human) corner += ds.cost(i);
  for (std::size_t j : complement(human, ds.size())) corner += ds.y(j) * ds.y(j);
  Mat z(d + 1, Vec(d + 1, 0.0));
  z[0][0] = corner;
  for (std::size_t r = 0; r < d; ++r) {
    z[0][r + 1] = b[r];
    z[r + 1][0] = b[r];
    for (std::size_t c = 0; c < d; ++c) z[r + 1][c + 1] = a[r][c];
  }
  return z;
}

inline double f_proper(const rha::Dataset& ds, const Set& human, double lambda) {
  return std::log(cofactor_det(block(ds, human, lambda)));
}

inline double g_proper(const rha::Dataset& ds, const Set& human, double lambda) {
  return std::log(cofactor_det(ridge_system(ds, human, lambda)));
}

// Extended values at S = V: minimum over pairs of the two-step extrapolation.
inline std::pair<double, double> full_set_fg(const rha::Dataset& ds, double lambda) {
  const std::size_t n = ds.size();
  double total_c = 0.0;
  for (std::size_t i = 0; i < n; ++i) total_c += ds.cost(i);
  const double log_c = std::log(total_c);
  const Set all = complement({}, n);
  auto minus = [&](std::initializer_list<std::size_t> out) {
    Set s;
    for (std::size_t i : all) {
      bool skip = false;
      for (std::size_t o : out) skip = skip || o == i;
      if (!skip) s.push_back(i);
    }
    return s;
  };
  double fv = std::numeric_limits<double>::infinity();
  double gv = std::numeric_limits<double>::infinity();
  for (std::size_t k1 = 0; k1 < n; ++k1) {
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      if (k1 == k2) continue;
      const Set a = minus({k1}), b = minus({k2}), ab = minus({k1, k2});
      const double fp = f_proper(ds, a, lambda) + f_proper(ds, b, lambda) - f_proper(ds, ab, lambda);
      const double gp = g_proper(ds, a, lambda) + g_proper(ds, b, lambda) - g_proper(ds, ab, lambda);
      fv = std::min({fv, fp, gp + log_c});
      gv = std::min({gv, fp - log_c, gp});
    }
  }
  return {fv, gv};
}

// Minimum loss over |S| <= n by enumerating every subset.
inline std::pair<Set, double> brute_force_opt(const rha::Dataset& ds, double lambda,
                                              std::size_t budget) {
  const std::size_t n = ds.size();
  Set best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const Set s = from_mask(mask, n);
    if (s.size() > budget) continue;
    const double l = direct_loss(ds, s, lambda);
    if (l < best_loss) {
      best_loss = l;
      best = s;
    }
  }
  return {best, best_loss};
}

// ---- instances ----

// d = 1, x = (1, 2), y = (2, 1).
inline rha::Dataset instance_a() { return rha::Dataset(1, {1.0, 2.0}, {2.0, 1.0}, {0.1, 0.1}); }
inline rha::Dataset instance_b() { return rha::Dataset(1, {1.0, 2.0}, {2.0, 1.0}, {0.6, 0.6}); }

struct Instance {
  rha::Dataset data;
  double lambda = 0.0;
  double gamma = 0.0;
};

// Random instance with c_k <= gamma y_k^2, y_k != 0 and lambda strictly above
// gamma/(1-gamma) max |x|^2, i.e. the nonincreasing hypotheses with margin.
inline Instance hypothesis_instance(rha::Rng& rng, std::size_t d, std::size_t n) {
  const double gamma = rng.uniform(0.05, 0.6);
  std::vector<double> x(n * d), y(n), c(n);
  double max_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[i * d + j] = rng.uniform(-1.0, 1.0);
      sq += x[i * d + j] * x[i * d + j];
    }
    max_sq = std::max(max_sq, sq);
    const double mag = rng.uniform(0.3, 1.5);
    y[i] = rng.uniform01() < 0.5 ? -mag : mag;
    c[i] = gamma * rng.uniform(0.0, 1.0) * y[i] * y[i];
  }
  const double lambda = gamma / (1.0 - gamma) * max_sq * rng.uniform(1.05, 3.0) + 1e-3;
  return {rha::Dataset(d, std::move(x), std::move(y), std::move(c)), lambda, gamma};
}

// Unconstrained random instance.
inline Instance free_instance(rha::Rng& rng, std::size_t d, std::size_t n) {
  std::vector<double> x(n * d), y(n), c(n);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  for (double& v : y) v = rng.normal();
  for (double& v : c) v = std::abs(0.5 * rng.normal());
  return {rha::Dataset(d, std::move(x), std::move(y), std::move(c)), rng.uniform(0.01, 1.0), 0.0};
}

inline bool rel_close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace oracle
