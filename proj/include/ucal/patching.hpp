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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ucal/dataset.hpp"
#include "ucal/utilities.hpp"

namespace ucal {

// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_simplex(std::span<const double> x);
void project_simplex(std::span<const double> x, std::span<double> out, std::vector<double>& scratch);

// One masked correction. Rows with v_u(p) in [lo, hi] move to
// project(p - step * sign * uvec(p)); other rows are untouched. `sign` is the
// witness orientation: sign = +1 means predictions overstate the realized
// utility on the interval, so the update lowers v.
struct PatchRecord {
  UtilitySpec spec;
  double lo = 0.0;
  double hi = 0.0;
  int sign = 1;
  double step = 0.0;
};

struct IterationLog {
  double err = 0.0;
  double brier_before = 0.0;
  double brier_after = 0.0;
  double step = 0.0;
  std::size_t backtracks = 0;
};

struct PatchSequence {
  std::size_t num_classes = 0;
  std::vector<PatchRecord> records;
  std::vector<IterationLog> history;
  double final_err = 0.0;  // witness value at the stopping iteration
  bool converged = false;  // stopped on err <= epsilon rather than max_iters
};

enum class StepRule { Theoretical, Armijo };

struct ArmijoParams {
  double init_scale = 1.0;
  double shrink = 0.5;
  double c = 0.5;
  std::size_t max_backtracks = 30;
};

struct AugmentParams {
  std::size_t count = 264;  // extra Rank/Linear utilities per iteration
  std::uint64_t seed = 0;
};

struct PatchConfig {
  std::vector<UtilitySpec> pool;  // empty: comb_pool(C)
  std::optional<AugmentParams> augment;
  double epsilon = 0.01;
  std::size_t max_iters = 1000;
  StepRule step_rule = StepRule::Theoretical;
  ArmijoParams armijo;
  int threads = 1;
};

struct Witness {
  UtilitySpec spec;
  double lo = 0.0;
  double hi = 0.0;
  int sign = 1;          // patch orientation, see PatchRecord
  double err = 0.0;      // (1/n) sum over the interval of sign * <p - e_y, uvec(p)>
  std::size_t pool_index = 0;
};

// Worst witness over the pool; ties go to the earliest pool entry.
Witness find_worst_witness(const LabeledPredictions& preds, std::span<const UtilitySpec> pool, int threads = 1);

std::vector<double> apply_patch(std::span<const double> p, const PatchRecord& record);

// Iterative patching on the calibration set. Throws ConfigError for
// epsilon <= 0 or max_iters == 0.
PatchSequence fit(const LabeledPredictions& cal, const PatchConfig& config);

// Applies every record in order to each row. Throws DomainError on a class
// count mismatch.
Matrix transform(const Matrix& probs, const PatchSequence& seq, int threads = 1);
LabeledPredictions transform(const LabeledPredictions& preds, const PatchSequence& seq, int threads = 1);

// Pool used at a given iteration: the base pool plus augmented samples.
std::vector<UtilitySpec> iteration_pool(const std::vector<UtilitySpec>& base, const std::optional<AugmentParams>& augment,
                                        std::size_t num_classes, std::size_t iteration);

}  // namespace ucal
