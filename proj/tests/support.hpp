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

#include <cmath>
#include <cstdint>
#include <vector>

#include "ucal/dataset.hpp"
#include "ucal/rng.hpp"

namespace ucal::testing {

// Random point on the simplex; about a fifth of the draws are sparse so that
// zero entries and ties show up.
inline std::vector<double> random_simplex(std::size_t C, SeedStream& rng) {
  std::vector<double> p(C);
  const bool sparse = rng.below(5) == 0;
  double total = 0.0;
  for (auto& x : p) {
    x = (sparse && rng.below(2) == 0) ? 0.0 : rng.exponential();
    total += x;
  }
  if (total == 0.0) {
    p[rng.below(C)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Predictions from a Dirichlet(1) draw with labels from a tempered version
// of the prediction, so the data is miscalibrated in a generic way.
inline LabeledPredictions random_dataset(std::uint64_t seed, std::size_t n, std::size_t C) {
  SeedStream rng(seed, StreamTag::Test, 0);
  Matrix probs(n, C);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = random_simplex(C, rng);
    std::copy(p.begin(), p.end(), probs.row(i).begin());
    std::vector<double> q(C);
    double total = 0.0;
    for (std::size_t j = 0; j < C; ++j) total += q[j] = std::sqrt(p[j]) + 0.05;
    double u = rng.uniform() * total;
    std::size_t y = 0;
    while (y + 1 < C && u >= q[y]) u -= q[y++];
    labels[i] = static_cast<Label>(y);
  }
  return {std::move(probs), std::move(labels)};
}

// Random finite population with `S` distinct support points.
inline FiniteDistribution random_distribution(SeedStream& rng, std::size_t S, std::size_t C) {
  Matrix support(S, C);
  Matrix cond(S, C);
  std::vector<double> w(S);
  double wt = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> p;
    bool fresh = false;
    while (!fresh) {
      p = random_simplex(C, rng);
      fresh = true;
      for (std::size_t t = 0; t < s; ++t) {
        bool same = true;
        for (std::size_t j = 0; j < C; ++j) same = same && support(t, j) == p[j];
        if (same) fresh = false;
      }
    }
    const auto q = random_simplex(C, rng);
    for (std::size_t j = 0; j < C; ++j) {
      support(s, j) = p[j];
      cond(s, j) = q[j];
    }
    wt += w[s] = rng.uniform() + 0.01;
  }
  for (auto& x : w) x /= wt;
  return {std::move(support), std::move(w), std::move(cond)};
}

}  // namespace ucal::testing
