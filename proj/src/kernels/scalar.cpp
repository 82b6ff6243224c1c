/*
 * Copyright 2026 The signemo Authors.
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

// Scalar reference kernels. These define the numerics that every SIMD
// variant is tested against.

#include <cmath>

#include "signemo/kernels/kernels.hpp"

namespace signemo::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x,
          const double* bias, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = (bias ? bias[r] : 0.0) + dot(w + r * cols, x, cols);
  }
}

void gemv_t_acc(const double* w, std::size_t rows, std::size_t cols, const double* dy,
                double* dx) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (dy[r] != 0.0) axpy(dy[r], w + r * cols, dx, cols);
  }
}

void ger_acc(double* dw, std::size_t rows, std::size_t cols, const double* dy, const double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (dy[r] != 0.0) axpy(dy[r], x, dw + r * cols, cols);
  }
}

void adam(double* p, const double* g, double* m, double* v, std::size_t n, const AdamStep& s) {
  const double one_minus_b1 = 1.0 - s.beta1;
  const double one_minus_b2 = 1.0 - s.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = s.beta1 * m[i] + one_minus_b1 * g[i];
    v[i] = s.beta2 * v[i] + one_minus_b2 * (g[i] * g[i]);
    const double m_hat = m[i] * s.bias_correction1;
    const double v_hat = v[i] * s.bias_correction2;
    p[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.eps);
  }
}

}  // namespace

const KernelTable kTable = {Isa::kScalar, dot, axpy, gemv, gemv_t_acc, ger_acc, adam};

}  // namespace signemo::kernels::scalar
