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

#include "ucal/simd.hpp"

namespace ucal::simd::detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
double sum_squares_scalar(const double* x, std::size_t n);
double sum_scalar(const double* x, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void shift_clamp_scalar(const double* x, double tau, double* out, std::size_t n);
std::size_t argmax_scalar(const double* x, std::size_t n);

#if defined(UCAL_HAVE_AVX2)
double dot_avx2(const double* x, const double* y, std::size_t n);
double sum_squares_avx2(const double* x, std::size_t n);
double sum_avx2(const double* x, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void shift_clamp_avx2(const double* x, double tau, double* out, std::size_t n);
std::size_t argmax_avx2(const double* x, std::size_t n);
#endif

}  // namespace ucal::simd::detail
