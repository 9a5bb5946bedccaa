// Copyright 2026 the ucal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels.hpp"

namespace ucal::simd {

namespace {

constexpr KernelTable kScalar{
    Level::Scalar,          "scalar",
    detail::dot_scalar,     detail::sum_squares_scalar,
    detail::sum_scalar,     detail::axpy_scalar,
    detail::shift_clamp_scalar, detail::argmax_scalar,
};

#if defined(UCAL_HAVE_AVX2)
constexpr KernelTable kAvx2{
    Level::Avx2,          "avx2",
    detail::dot_avx2,     detail::sum_squares_avx2,
    detail::sum_avx2,     detail::axpy_avx2,
    detail::shift_clamp_avx2, detail::argmax_avx2,
};
#endif

bool cpu_has_avx2() {
#if defined(UCAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  const char* env = std::getenv("UCAL_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
  if (const KernelTable* t = avx2_kernels()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{select_default()};
  return table;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(UCAL_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

bool set_level(Level level) {
  const KernelTable* t = level == Level::Scalar ? &kScalar : avx2_kernels();
  if (t == nullptr) return false;
  active().store(t, std::memory_order_release);
  return true;
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace ucal::simd
