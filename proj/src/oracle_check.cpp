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

#include "ucal/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ucal/error.hpp"
#include "ucal/estimators.hpp"

namespace ucal {

namespace {

std::vector<double> random_simplex_point(std::size_t C, SeedStream& rng, bool quantize) {
  std::vector<double> p(C);
  double total = 0.0;
  for (double& x : p) {
    x = quantize ? static_cast<double>(rng.below(4)) : rng.exponential();
    total += x;
  }
  if (total == 0.0) {
    p[rng.below(C)] = 1.0;
    return p;
  }
  for (double& x : p) x /= total;
  return p;
}

family::Similarity random_similarity(std::size_t C, SeedStream& rng) {
  Matrix sim(C, C);
  for (std::size_t i = 0; i < C; ++i) {
    sim(i, i) = 1.0;
    for (std::size_t j = i + 1; j < C; ++j) sim(i, j) = sim(j, i) = rng.uniform(-1.0, 1.0);
  }
  return {std::move(sim)};
}

}  // namespace

UtilitySpec random_utility(std::size_t C, SeedStream& rng) {
  switch (rng.below(9)) {
    case 0: return family::TopClass{};
    case 1: return family::ClassWise{static_cast<std::size_t>(rng.below(C))};
    case 2: return family::TopK{1 + static_cast<std::size_t>(rng.below(C))};
    case 3: return sample_rank(C, rng);
    case 4: return sample_linear(C, rng);
    case 5: return family::Dcg{kDcgGammaGrid[rng.below(std::size(kDcgGammaGrid))]};
    case 6: return sample_decision(C, 2 + static_cast<std::size_t>(rng.below(3)), rng);
    case 7: {
      if (rng.below(2) == 0) return gain_matrix_aligned(C, rng);
      std::vector<std::vector<std::size_t>> partition(2);
      for (std::size_t j = 0; j < C; ++j) partition[rng.below(2)].push_back(j);
      return gain_matrix_misaligned(C, partition, rng);
    }
    default: return random_similarity(C, rng);
  }
}

OracleInstance random_oracle_instance(std::uint64_t seed, std::size_t trial, std::size_t n_max, std::size_t c_max) {
  if (n_max < 1 || c_max < 2) throw DomainError("oracle instances need n_max >= 1 and c_max >= 2");
  SeedStream rng(seed, StreamTag::OracleCheck, trial);
  const std::size_t n = 1 + static_cast<std::size_t>(rng.below(n_max));
  const std::size_t C = 2 + static_cast<std::size_t>(rng.below(c_max - 1));
  const std::uint64_t style = rng.below(3);  // 0: distinct rows, 1: repeated rows, 2: quantized rows

  std::vector<std::vector<double>> base;
  if (style == 1) {
    const std::size_t distinct = std::max<std::size_t>(1, n / 4);
    for (std::size_t k = 0; k < distinct; ++k) base.push_back(random_simplex_point(C, rng, false));
  }
  Matrix probs(n, C);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = style == 1 ? base[rng.below(base.size())] : random_simplex_point(C, rng, style == 2);
    std::copy(p.begin(), p.end(), probs.row(i).begin());
    labels[i] = static_cast<Label>(rng.below(C));
  }
  return {LabeledPredictions(std::move(probs), std::move(labels)), random_utility(C, rng)};
}

OracleCheckSummary run_oracle_check(const OracleCheckConfig& config) {
  OracleCheckSummary summary;
  bool fault_pending = config.inject_fault;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const auto inst = random_oracle_instance(config.seed, t, config.n_max, config.c_max);
    auto rows = residuals(inst.preds, inst.spec);
    const double n = static_cast<double>(inst.preds.size());
    const double slow = uc_hat_oracle(rows, n);
    if (fault_pending) {
      // Flip the largest residual; trials where the flip cannot change the
      // supremum (e.g. n = 1) pass the fault on to the next trial.
      auto it = std::max_element(rows.begin(), rows.end(),
                                 [](const Residual& a, const Residual& b) { return std::fabs(a.r) < std::fabs(b.r); });
      it->r = -it->r + (it->r == 0.0 ? 1.0 : 0.0);
      it->e = -it->e;
    }
    const double fast = uc_hat_from_residuals(std::move(rows), n).value;
    const double diff = std::fabs(fast - slow);
    if (fault_pending && diff > config.tolerance) fault_pending = false;
    summary.max_abs_diff = std::max(summary.max_abs_diff, diff);
    ++summary.trials;
    if (!(diff <= config.tolerance)) {
      ++summary.failures;
      if (!summary.first_failing_trial) {
        summary.first_failing_trial = t;
        char buf[256];
        std::snprintf(buf, sizeof buf, "trial %zu (seed %llu, n=%zu, C=%zu, %s): fast %.17g vs oracle %.17g", t,
                      static_cast<unsigned long long>(config.seed), inst.preds.size(), inst.preds.num_classes(),
                      utility_id(inst.spec).c_str(), fast, slow);
        summary.first_failure = buf;
      }
    }
  }
  return summary;
}

}  // namespace ucal
