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

#include <atomic>
#include <cstdlib>
#include <string>

#include "signemo/error.hpp"
#include "signemo/kernels/kernels.hpp"

namespace signemo::kernels {
namespace {

const KernelTable* pick_default() {
  if (const char* env = std::getenv("SIGNEMO_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return &scalar::kTable;
    if (want == "avx2" && cpu_supports(Isa::kAvx2)) return &table(Isa::kAvx2);
  }
  if (cpu_supports(Isa::kAvx2)) return &table(Isa::kAvx2);
  return &scalar::kTable;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{pick_default()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(SIGNEMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::kScalar};
  if (cpu_supports(Isa::kAvx2)) out.push_back(Isa::kAvx2);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error("unsupported_isa", "kernel variant '" + std::string(to_string(isa)) +
                                       "' is not available on this CPU/build");
  }
  switch (isa) {
    case Isa::kScalar:
      return scalar::kTable;
    case Isa::kAvx2:
#if defined(SIGNEMO_HAVE_AVX2)
      return avx2::kTable;
#else
      break;
#endif
  }
  return scalar::kTable;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

}  // namespace signemo::kernels
