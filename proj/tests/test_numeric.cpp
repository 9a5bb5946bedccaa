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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ucal/numeric.hpp"
#include "ucal/parallel.hpp"
#include "ucal/rng.hpp"

using namespace ucal;

TEST_CASE("fsum is exact and order independent") {
  CHECK(fsum(std::vector<double>{}) == 0.0);
  CHECK(fsum(std::vector<double>{1e100, 1.0, -1e100}) == 1.0);
  CHECK(fsum(std::vector<double>(10, 0.1)) == 1.0);

  std::vector<double> x;
  SeedStream rng(1, StreamTag::Test, 0);
  for (int i = 0; i < 500; ++i) x.push_back(rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-8.0, 8.0)));
  const double reference = fsum(x);
  for (int rep = 0; rep < 10; ++rep) {
    for (std::size_t i = x.size() - 1; i > 0; --i) std::swap(x[i], x[rng.below(i + 1)]);
    CHECK(fsum(x) == reference);
  }

  ExactAccumulator acc;
  for (double v : x) acc.add(v);
  CHECK(acc.result() == reference);
}

TEST_CASE("matrix rows round trip") {
  const std::vector<std::vector<double>> rows{{1, 2, 3}, {4, 5, 6}};
  const auto m = Matrix::from_rows(rows);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 6.0);
  CHECK(m.to_rows() == rows);
  CHECK_THROWS(Matrix::from_rows({{1, 2}, {3}}));
  CHECK_THROWS(Matrix(2, 2, std::vector<double>{1, 2, 3}));
}

TEST_CASE("seed streams are reproducible and separated") {
  SeedStream a(42, StreamTag::Ecdf, 3);
  SeedStream b(42, StreamTag::Ecdf, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  CHECK(derive_seed(42, StreamTag::Ecdf, 3) != derive_seed(42, StreamTag::Ecdf, 4));
  CHECK(derive_seed(42, StreamTag::Ecdf, 3) != derive_seed(42, StreamTag::Synth, 3));
  CHECK(derive_seed(42, StreamTag::Ecdf, 3) != derive_seed(43, StreamTag::Ecdf, 3));

  SeedStream rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.below(7) < 7);
    CHECK(rng.exponential() >= 0.0);
  }
  CHECK(rng.below(1) == 0);
}

TEST_CASE("parallel_for covers every index once for any thread count") {
  for (int threads : {1, 2, 3, 8, 64}) {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) ++hits[i];
    });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
  std::atomic<int> calls{0};
  parallel_for(0, 4, [&](std::size_t, std::size_t) { ++calls; });
  CHECK(calls.load() == 0);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t begin, std::size_t) {
                                 if (begin == 0) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
