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

#pragma once

// Double-precision inner-loop kernels. Every kernel has a scalar reference
// implementation; vectorized variants are compiled separately and picked at
// runtime from the CPU feature set. The active table only changes through
// set_level, so results are reproducible run to run on one machine.

#include <cstddef>
#include <string_view>

namespace ucal::simd {

enum class Level { Scalar, Avx2 };

struct KernelTable {
  Level level;
  const char* name;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = max(x[i] - tau, 0)
  void (*shift_clamp)(const double* x, double tau, double* out, std::size_t n);
  // index of the first maximal entry; n >= 1
  std::size_t (*argmax)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();

// The table used by the library. Chosen on first call: the best supported
// level, unless the UCAL_SIMD environment variable is set to "scalar".
const KernelTable& kernels();

// Override the active level (tests and benchmarks). Returns false when the
// requested level is unavailable on this machine.
bool set_level(Level level);

std::string_view level_name(Level level);

}  // namespace ucal::simd
