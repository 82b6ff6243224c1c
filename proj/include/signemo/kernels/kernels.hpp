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

#pragma once

// Dense double-precision kernels behind the recurrent model.
//
// Every kernel has a scalar reference implementation. Wider variants are
// compiled in separate translation units with their own target flags and
// picked at runtime from CPUID. The environment variable SIGNEMO_KERNELS
// ("scalar" or "avx2") overrides the choice.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace signemo::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

struct AdamStep {
  double lr;
  double beta1;
  double beta2;
  double eps;
  /// 1 / (1 - beta1^t) and 1 / (1 - beta2^t).
  double bias_correction1;
  double bias_correction2;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y = bias + W x, W row-major rows x cols. bias may be null.
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* y);
  /// dx += W^T dy
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* dy,
                     double* dx);
  /// dW += dy x^T
  void (*ger_acc)(double* dw, std::size_t rows, std::size_t cols, const double* dy,
                  const double* x);
  /// In-place Adam update of params with moment buffers m and v.
  void (*adam)(double* params, const double* grads, double* m, double* v, std::size_t n,
               const AdamStep& step);
};

bool cpu_supports(Isa isa);

/// Variants compiled into this binary and usable on this CPU.
std::vector<Isa> available_isas();

/// Table for a specific ISA; throws if it is unavailable.
const KernelTable& table(Isa isa);

/// Best available table (or the SIGNEMO_KERNELS override), chosen once.
const KernelTable& active();

/// Replaces the active table, e.g. to run a whole computation on the scalar
/// reference. Not thread-safe with respect to concurrent kernel calls.
void set_active(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace scalar {
extern const KernelTable kTable;
}
#if defined(SIGNEMO_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

}  // namespace signemo::kernels
