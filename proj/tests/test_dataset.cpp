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
#include <cmath>
#include <numeric>
#include <set>

#include "support.hpp"
#include "ucal/dataset.hpp"
#include "ucal/error.hpp"

using namespace ucal;

namespace {

LabeledPredictions single_row(std::vector<double> p, Label y) {
  return {Matrix::from_rows({std::move(p)}), {y}};
}

}  // namespace

TEST_CASE("construction checks shape only") {
  CHECK_THROWS_AS(LabeledPredictions(Matrix(0, 3), {}), DomainError);
  CHECK_THROWS_AS(LabeledPredictions(Matrix(2, 1, 1.0), {0, 0}), DomainError);
  CHECK_THROWS_AS(LabeledPredictions(Matrix(2, 2, 0.5), {0}), DomainError);
  CHECK_NOTHROW(LabeledPredictions(Matrix(2, 2, 0.7), {0, 1}));
}

TEST_CASE("validate") {
  SUBCASE("exact simplex row") {
    const auto report = validate(single_row({0.5, 0.5}, 0), false);
    CHECK(report.max_row_sum_deviation == 0.0);
    CHECK(report.label_violations == 0);
    CHECK_FALSE(report.renormalized);
  }
  SUBCASE("renormalization rescales rows") {
    const auto report = validate(single_row({0.5000004, 0.5}, 0), true);
    const auto row = report.corrected.row(0);
    CHECK(row[0] == doctest::Approx(0.5000002).epsilon(1e-9));
    CHECK(row[1] == doctest::Approx(0.4999998).epsilon(1e-9));
    CHECK(std::fabs(row[0] + row[1] - 1.0) <= 1e-15);
    CHECK(report.renormalized);
    CHECK(report.rows_outside_tolerance == 0);
  }
  SUBCASE("small deviations are reported but accepted") {
    const auto report = validate(single_row({0.5001, 0.5}, 1), false);
    CHECK(report.rows_outside_tolerance == 1);
    CHECK(report.max_row_sum_deviation == doctest::Approx(1e-4));
  }
  SUBCASE("fatal violations") {
    CHECK_THROWS_AS(validate(single_row({0.7, 0.7}, 0), false), ValidationError);
    CHECK_THROWS_AS(validate(single_row({1.1, -0.1}, 0), false), ValidationError);
    CHECK_THROWS_AS(validate(single_row({0.5, 0.5}, 2), false), ValidationError);
    CHECK_THROWS_AS(validate(single_row({0.5, 0.5}, 2), true), ValidationError);
    CHECK_THROWS_AS(validate(single_row({NAN, 0.5}, 0), true), ValidationError);
    CHECK_THROWS_AS(validate(single_row({0.0, 0.0}, 0), true), ValidationError);
  }
  SUBCASE("renormalize repairs large violations") {
    const auto report = validate(single_row({0.7, 0.7}, 0), true);
    CHECK(report.corrected.row(0)[0] == 0.5);
    const auto clamped = validate(single_row({1.1, -0.1}, 0), true);
    CHECK(clamped.corrected.row(0)[0] == 1.0);
    CHECK(clamped.corrected.row(0)[1] == 0.0);
  }
  SUBCASE("generators always validate") {
    CHECK_NOTHROW(validate(gen_two_point(20), false));
    CHECK_NOTHROW(validate(gen_calibrated(500, 7, 40, 3).first, false));
  }
}

TEST_CASE("split") {
  const auto data = testing::random_dataset(1, 10, 3);
  const auto a = split(data, 0.7, 1);
  const auto b = split(data, 0.7, 1);
  const auto c = split(data, 0.7, 2);
  CHECK(a.calibration.size() == 7);
  CHECK(a.test.size() == 3);
  CHECK(a.calibration_indices == b.calibration_indices);
  CHECK(a.test_indices == b.test_indices);
  CHECK(c.calibration.size() == 7);

  for (const auto* s : {&a, &c}) {
    std::vector<std::size_t> all = s->calibration_indices;
    all.insert(all.end(), s->test_indices.begin(), s->test_indices.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(10);
    std::iota(expected.begin(), expected.end(), 0);
    CHECK(all == expected);
  }
  for (std::size_t k = 0; k < a.calibration.size(); ++k) {
    const auto i = a.calibration_indices[k];
    CHECK(a.calibration.label(k) == data.label(i));
    CHECK(std::equal(a.calibration.row(k).begin(), a.calibration.row(k).end(), data.row(i).begin()));
  }

  CHECK(split(data, 0.01, 1).calibration.size() == 1);
  CHECK(split(data, 0.99, 1).test.size() == 1);
  CHECK_THROWS_AS(split(data, 0.0, 1), DomainError);
  CHECK_THROWS_AS(split(data, 1.0, 1), DomainError);
  CHECK_THROWS_AS(split(testing::random_dataset(1, 1, 3), 0.5, 1), DomainError);
}

TEST_CASE("two-point sample has exact group statistics") {
  const auto data = gen_two_point(20);
  REQUIRE(data.size() == 40);
  REQUIRE(data.num_classes() == 3);
  std::size_t a_rows = 0, a_zero = 0, b_rows = 0, b_zero = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool is_a = data.row(i)[0] == 0.45;
    CHECK((is_a || data.row(i)[0] == 0.55));
    CHECK(data.label(i) <= 1);
    (is_a ? a_rows : b_rows) += 1;
    if (data.label(i) == 0) (is_a ? a_zero : b_zero) += 1;
  }
  CHECK(a_rows == 20);
  CHECK(b_rows == 20);
  CHECK(a_zero == 1);   // 5%
  CHECK(b_zero == 19);  // 95%
  CHECK_THROWS_AS(gen_two_point(15), DomainError);
  CHECK_THROWS_AS(gen_two_point(0), DomainError);
}

TEST_CASE("finite distributions") {
  const auto dist = two_point_population();
  CHECK(dist.support_size() == 2);
  CHECK(dist.weight(0) == 0.5);

  CHECK_THROWS_AS(FiniteDistribution(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}), {0.5, 0.5},
                                     Matrix::from_rows({{1, 0}, {0, 1}})),
                  DomainError);
  CHECK_THROWS_AS(FiniteDistribution(Matrix::from_rows({{0.5, 0.5}}), {0.9}, Matrix::from_rows({{1, 0}})),
                  DomainError);
  CHECK_THROWS_AS(FiniteDistribution(Matrix::from_rows({{0.5, 0.6}}), {1.0}, Matrix::from_rows({{1, 0}})),
                  DomainError);
  CHECK_THROWS_AS(FiniteDistribution(Matrix::from_rows({{0.5, 0.5}}), {1.0}, Matrix::from_rows({{1.5, -0.5}})),
                  DomainError);
}

TEST_CASE("calibrated generator") {
  const auto [data, law] = gen_calibrated(300, 4, 25, 9);
  const auto [again, law2] = gen_calibrated(300, 4, 25, 9);
  CHECK(data == again);
  CHECK(law == law2);
  CHECK(law.support_size() == 25);
  for (std::size_t s = 0; s < law.support_size(); ++s) {
    for (std::size_t j = 0; j < 4; ++j) CHECK(law.point(s)[j] == law.label_law(s)[j]);
  }
  double total = 0.0;
  for (double w : law.weights()) total += w;
  CHECK(std::fabs(total - 1.0) <= 1e-12);

  // Every sampled row is a support point.
  std::set<std::vector<double>> points;
  for (std::size_t s = 0; s < law.support_size(); ++s) points.emplace(law.point(s).begin(), law.point(s).end());
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(points.count({data.row(i).begin(), data.row(i).end()}) == 1);
}

TEST_CASE("miscalibrated generator follows the label law") {
  const auto law = two_point_population();
  const auto [data, same] = gen_miscalibrated(law, 20000, 4);
  CHECK(same == law);
  std::size_t a = 0, a_zero = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.row(i)[0] != 0.45) continue;
    ++a;
    a_zero += data.label(i) == 0;
  }
  CHECK(std::fabs(static_cast<double>(a) / 20000.0 - 0.5) < 0.02);
  CHECK(std::fabs(static_cast<double>(a_zero) / static_cast<double>(a) - 0.05) < 0.01);
}
