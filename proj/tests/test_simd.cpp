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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "ucal/estimators.hpp"
#include "ucal/patching.hpp"
#include "ucal/rng.hpp"
#include "ucal/simd.hpp"

using namespace ucal;

namespace {

std::vector<double> random_vector(SeedStream& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-2.0, 2.0);
  // Repeated entries exercise the first-index rule of argmax.
  if (n > 3) x[n / 2] = x[n / 3];
  return x;
}

// Restores the active level when a test case ends.
struct LevelGuard {
  simd::Level saved = simd::kernels().level;
  ~LevelGuard() { simd::set_level(saved); }
};

}  // namespace

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* fast = simd::avx2_kernels();
  if (fast == nullptr) {
    MESSAGE("AVX2 not available on this machine; only the scalar path is exercised");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  SeedStream rng(7, StreamTag::Test, 100);
  for (std::size_t n = 0; n < 70; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = random_vector(rng, n);
      const auto y = random_vector(rng, n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::fabs(x[i] * y[i]) + x[i] * x[i];
      const double tol = 1e-14 * (scale + 1.0);
      CHECK(std::fabs(fast->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= tol);
      CHECK(std::fabs(fast->sum_squares(x.data(), n) - ref.sum_squares(x.data(), n)) <= tol);
      CHECK(std::fabs(fast->sum(x.data(), n) - ref.sum(x.data(), n)) <= tol);

      // Element-wise kernels are exact.
      auto ya = y;
      auto yb = y;
      fast->axpy(0.37, x.data(), ya.data(), n);
      ref.axpy(0.37, x.data(), yb.data(), n);
      CHECK(ya == yb);

      std::vector<double> oa(n), ob(n);
      fast->shift_clamp(x.data(), 0.25, oa.data(), n);
      ref.shift_clamp(x.data(), 0.25, ob.data(), n);
      CHECK(oa == ob);

      if (n > 0) CHECK(fast->argmax(x.data(), n) == ref.argmax(x.data(), n));
    }
  }
}

TEST_CASE("argmax returns the first maximal index") {
  std::vector<double> x(19, 0.5);
  x[4] = 0.9;
  x[11] = 0.9;
  x[17] = 0.9;
  CHECK(simd::scalar_kernels().argmax(x.data(), x.size()) == 4);
  if (const auto* fast = simd::avx2_kernels()) CHECK(fast->argmax(x.data(), x.size()) == 4);
}

TEST_CASE("library results match across dispatch levels") {
  if (simd::avx2_kernels() == nullptr) return;
  LevelGuard guard;
  const auto data = testing::random_dataset(3, 400, 6);
  PatchConfig config;
  config.epsilon = 0.02;
  config.max_iters = 40;

  Matrix sim(6, 6, 0.3);
  for (std::size_t i = 0; i < 6; ++i) sim(i, i) = 1.0;

  REQUIRE(simd::set_level(simd::Level::Scalar));
  CHECK(simd::kernels().level == simd::Level::Scalar);
  const auto uc_scalar = uc_hat(data, family::Similarity{sim}).value;
  const auto seq_scalar = fit(data, config);

  REQUIRE(simd::set_level(simd::Level::Avx2));
  const auto uc_avx = uc_hat(data, family::Similarity{sim}).value;
  const auto seq_avx = fit(data, config);

  CHECK(uc_avx == doctest::Approx(uc_scalar).epsilon(1e-12));
  REQUIRE(seq_avx.history.size() == seq_scalar.history.size());
  for (std::size_t t = 0; t < seq_avx.history.size(); ++t) {
    CHECK(seq_avx.history[t].brier_after == doctest::Approx(seq_scalar.history[t].brier_after).epsilon(1e-12));
  }
}

TEST_CASE("level names") {
  CHECK(simd::level_name(simd::Level::Scalar) == "scalar");
  CHECK(simd::level_name(simd::Level::Avx2) == "avx2");
}
