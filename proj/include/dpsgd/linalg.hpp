//
// Copyright 2026 The dpsgd-bounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSGD_LINALG_HPP_
#define DPSGD_LINALG_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dpsgd/errors.hpp"

// Dense helpers for the small (d <= a few dozen) problems this toolkit
// trains on. Matrices are row-major.

namespace dpsgd::linalg {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

// y = M x for row-major M (rows x cols).
inline void matvec(std::span<const double> m, std::size_t rows,
                   std::size_t cols, std::span<const double> x,
                   std::span<double> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    const double* row = m.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
    y[r] = s;
  }
}

// Solves A x = rhs for symmetric positive definite A via Cholesky.
// A is overwritten-free; work happens on a copy.
inline std::vector<double> cholesky_solve(std::span<const double> a,
                                          std::size_t d,
                                          std::span<const double> rhs) {
  std::vector<double> l(a.begin(), a.end());
  for (std::size_t j = 0; j < d; ++j) {
    double diag = l[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= l[j * d + k] * l[j * d + k];
    if (!(diag > 0.0))
      throw parameter_error("cholesky_solve: matrix not positive definite");
    const double root = std::sqrt(diag);
    l[j * d + j] = root;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = l[i * d + j];
      for (std::size_t k = 0; k < j; ++k) v -= l[i * d + k] * l[j * d + k];
      l[i * d + j] = v / root;
    }
  }
  // Forward then backward substitution.
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < d; ++i) {
    double v = x[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i * d + k] * x[k];
    x[i] = v / l[i * d + i];
  }
  for (std::size_t ii = d; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double v = x[i];
    for (std::size_t k = i + 1; k < d; ++k) v -= l[k * d + i] * x[k];
    x[i] = v / l[i * d + i];
  }
  return x;
}

}  // namespace dpsgd::linalg

#endif  // DPSGD_LINALG_HPP_
