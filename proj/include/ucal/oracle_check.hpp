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
#include <string>

#include "ucal/dataset.hpp"
#include "ucal/utilities.hpp"

namespace ucal {

// A randomized (data, utility) pair for checking the fast estimator against
// the brute-force one. Draws cover every utility family and deliberately
// produce tied predicted utilities (repeated and quantized rows).
struct OracleInstance {
  LabeledPredictions preds;
  UtilitySpec spec;
};

OracleInstance random_oracle_instance(std::uint64_t seed, std::size_t trial, std::size_t n_max, std::size_t c_max);

// Random utility of a random family for C classes.
UtilitySpec random_utility(std::size_t num_classes, SeedStream& rng);

struct OracleCheckConfig {
  std::size_t trials = 1000;
  std::size_t n_max = 200;
  std::size_t c_max = 8;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
  // Flip the sign of one residual on the fast path of the first trial where
  // that changes the result (fault injection for testing the checker).
  bool inject_fault = false;
};

struct OracleCheckSummary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_abs_diff = 0.0;
  std::optional<std::size_t> first_failing_trial;
  std::string first_failure;  // human-readable description, empty if none
};

OracleCheckSummary run_oracle_check(const OracleCheckConfig& config);

}  // namespace ucal
