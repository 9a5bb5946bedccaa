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
#include <string>
#include <vector>

#include "ucal/dataset.hpp"
#include "ucal/utilities.hpp"

namespace ucal {

enum class SampledFamily { Linear, Rank };

std::string sampled_family_name(SampledFamily family);

// Empirical distribution of per-utility calibration errors over M utilities
// drawn from one family.
struct EcdfResult {
  std::vector<double> errors;  // sorted ascending
  SampledFamily family = SampledFamily::Linear;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  std::optional<double> band_halfwidth;
  std::optional<double> delta;
  // Sampled specs in draw order (index m), kept only on request.
  std::vector<UtilitySpec> utilities;
  // Unsorted error of utilities[m]; filled together with `utilities`.
  std::vector<double> errors_by_index;

  // Right-continuous step function: fraction of errors <= x.
  double cdf(double x) const;
};

// The m-th utility of an eCDF run: drawn from stream (seed, Ecdf, m).
UtilitySpec sample_utility(SampledFamily family, std::size_t num_classes, std::uint64_t seed, std::size_t m);

// Output is identical for every thread count.
EcdfResult ecdf_evaluate(const LabeledPredictions& preds, SampledFamily family, std::size_t M, std::uint64_t seed,
                         int threads = 1, bool keep_utilities = false);

// Half-width sqrt(ln(2/delta) / (2M)) of the DKW confidence band.
double dkw_band(std::size_t M, double delta);

struct EcdfDistance {
  double sup = 0.0;
  double l2 = 0.0;  // L2 norm of the difference on [0, 2]
};

EcdfDistance ecdf_compare(const EcdfResult& a, const EcdfResult& b);
EcdfDistance ecdf_compare(std::span<const double> sorted_a, std::span<const double> sorted_b);

}  // namespace ucal
