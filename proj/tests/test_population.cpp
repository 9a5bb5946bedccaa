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
#include <limits>

#include "support.hpp"
#include "ucal/estimators.hpp"
#include "ucal/oracle_check.hpp"

using namespace ucal;

namespace {

struct SupportRow {
  double v;
  std::vector<double> uvec;
};

std::vector<SupportRow> support_rows(const FiniteDistribution& dist, const UtilitySpec& spec) {
  std::vector<SupportRow> out;
  for (std::size_t s = 0; s < dist.support_size(); ++s) {
    const auto e = eval_utility(spec, dist.point(s));
    out.push_back({e.v, e.uvec});
  }
  return out;
}

// Supremum over closed intervals [a, b] with endpoints at support values.
double brute_population_uc(const FiniteDistribution& dist, const UtilitySpec& spec) {
  const auto rows = support_rows(dist, spec);
  std::vector<double> vs;
  for (const auto& r : rows) vs.push_back(r.v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  long double best = 0;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a; b < vs.size(); ++b) {
      long double total = 0;
      for (std::size_t s = 0; s < rows.size(); ++s) {
        if (rows[s].v < vs[a] || rows[s].v > vs[b]) continue;
        for (std::size_t j = 0; j < dist.num_classes(); ++j) {
          total += static_cast<long double>(dist.weight(s)) * (dist.label_law(s)[j] - dist.point(s)[j]) *
                   rows[s].uvec[j];
        }
      }
      best = std::max(best, std::fabs(total));
    }
  }
  return static_cast<double>(best);
}

// Risk of "act iff rule(v)" under the thresholded utility loss.
template <class Rule>
long double rule_risk(const FiniteDistribution& dist, const std::vector<SupportRow>& rows, double t0, Rule rule) {
  long double risk = 0;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const bool act = rule(rows[s].v);
    for (std::size_t j = 0; j < dist.num_classes(); ++j) {
      const double u = rows[s].uvec[j];
      if (act != (u >= t0)) risk += static_cast<long double>(dist.weight(s)) * dist.label_law(s)[j] * std::fabs(u - t0);
    }
  }
  return risk;
}

}  // namespace

TEST_CASE("population uc examples") {
  CHECK(population_uc(two_point_population(), family::TopClass{}) == doctest::Approx(0.2).epsilon(1e-12));
  const auto law = gen_calibrated(10, 4, 6, 1).second;
  SeedStream rng(1, StreamTag::Test, 20);
  for (int t = 0; t < 10; ++t) CHECK(population_uc(law, random_utility(4, rng)) <= 1e-15);
}

TEST_CASE("population uc equals interval enumeration") {
  SeedStream rng(2, StreamTag::Test, 21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t C = 2 + rng.below(4);
    const auto dist = testing::random_distribution(rng, 1 + rng.below(6), C);
    const auto spec = random_utility(C, rng);
    CHECK(population_uc(dist, spec) == doctest::Approx(brute_population_uc(dist, spec)).epsilon(1e-12));
  }
}

TEST_CASE("risk gap against exhaustive threshold rules") {
  SeedStream rng(3, StreamTag::Test, 22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t C = 2 + rng.below(4);
    const auto dist = testing::random_distribution(rng, 1 + rng.below(6), C);
    const auto spec = random_utility(C, rng);
    const double t0 = rng.uniform(-1.0, 1.0);
    const auto result = risk_gap_check(dist, spec, t0);
    const auto rows = support_rows(dist, spec);

    const long double risk_v = rule_risk(dist, rows, t0, [&](double v) { return v >= t0; });
    long double best = std::numeric_limits<long double>::infinity();
    std::vector<double> cuts{-INFINITY, INFINITY};
    for (const auto& r : rows) cuts.push_back(r.v);
    for (double s : cuts) {
      best = std::min(best, rule_risk(dist, rows, t0, [&](double v) { return v >= s; }));
      best = std::min(best, rule_risk(dist, rows, t0, [&](double v) { return v > s; }));
    }
    CHECK(std::fabs(result.risk_v - static_cast<double>(risk_v)) <= 1e-12);
    CHECK(std::fabs(result.risk_best_monotone - static_cast<double>(best)) <= 1e-12);
    CHECK(result.risk_best_monotone <= result.risk_v + 1e-12);
    CHECK(result.holds);
  }
}

TEST_CASE("risk gap examples") {
  CHECK(risk_gap_check(two_point_population(), family::TopClass{}, 0.5).holds);
  const auto law = gen_calibrated(10, 3, 5, 4).second;
  SeedStream rng(4, StreamTag::Test, 23);
  for (int t = 0; t < 20; ++t) {
    const auto r = risk_gap_check(law, random_utility(3, rng), rng.uniform(-1.0, 1.0));
    CHECK(r.risk_v - r.risk_best_monotone <= 1e-12);
  }
}

TEST_CASE("dcu bound") {
  const auto two = dcu_bound_check(two_point_population(), family::TopClass{});
  CHECK(two.uc == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(two.bound == doctest::Approx(2.0 * std::sqrt(0.4) + 0.2).epsilon(1e-12));
  CHECK(two.bound == doctest::Approx(1.4649).epsilon(1e-4));
  CHECK(two.holds);

  const auto law = gen_calibrated(10, 3, 5, 5).second;
  const auto calibrated = dcu_bound_check(law, family::Linear{{1, -0.5, 0.2}});
  CHECK(calibrated.dcu_upper == 0.0);
  CHECK(calibrated.holds);

  SeedStream rng(5, StreamTag::Test, 24);
  for (int t = 0; t < 200; ++t) {
    const std::size_t C = 2 + rng.below(4);
    const auto dist = testing::random_distribution(rng, 1 + rng.below(6), C);
    const auto r = dcu_bound_check(dist, random_utility(C, rng));
    CHECK(r.dcu_upper >= 0.0);
    CHECK(r.holds);
  }
}
