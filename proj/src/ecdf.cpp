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

#include "ucal/ecdf.hpp"

#include <algorithm>
#include <cmath>

#include "ucal/error.hpp"
#include "ucal/estimators.hpp"
#include "ucal/parallel.hpp"

namespace ucal {

std::string sampled_family_name(SampledFamily family) {
  return family == SampledFamily::Linear ? "linear" : "rank";
}

double EcdfResult::cdf(double x) const {
  if (errors.empty()) return 0.0;
  const auto below = std::upper_bound(errors.begin(), errors.end(), x) - errors.begin();
  return static_cast<double>(below) / static_cast<double>(errors.size());
}

UtilitySpec sample_utility(SampledFamily family, std::size_t num_classes, std::uint64_t seed, std::size_t m) {
  SeedStream rng(seed, StreamTag::Ecdf, m);
  if (family == SampledFamily::Linear) return sample_linear(num_classes, rng);
  return sample_rank(num_classes, rng);
}

EcdfResult ecdf_evaluate(const LabeledPredictions& preds, SampledFamily family, std::size_t M, std::uint64_t seed,
                         int threads, bool keep_utilities) {
  if (M == 0) throw DomainError("M must be at least 1");
  const std::size_t C = preds.num_classes();
  std::vector<double> errors(M);
  std::vector<UtilitySpec> specs(keep_utilities ? M : 0);

  // Parallelize across utilities when there are enough of them; otherwise
  // spend the workers inside each estimate.
  const bool outer = M >= static_cast<std::size_t>(std::max(threads, 1));
  parallel_for(M, outer ? threads : 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      UtilitySpec spec = sample_utility(family, C, seed, m);
      errors[m] = uc_hat(preds, spec, outer ? 1 : threads).value;
      if (keep_utilities) specs[m] = std::move(spec);
    }
  });

  EcdfResult out;
  out.family = family;
  out.M = M;
  out.seed = seed;
  if (keep_utilities) {
    out.utilities = std::move(specs);
    out.errors_by_index = errors;
  }
  std::sort(errors.begin(), errors.end());
  out.errors = std::move(errors);
  return out;
}

double dkw_band(std::size_t M, double delta) {
  if (M == 0) throw DomainError("dkw_band needs M >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("dkw_band needs 0 < delta < 1");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(M)));
}

EcdfDistance ecdf_compare(std::span<const double> a, std::span<const double> b) {
  EcdfDistance out;
  if (a.empty() || b.empty()) throw DomainError("ecdf_compare needs non-empty samples");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  // Walk the merged jump points; between consecutive breakpoints both step
  // functions are constant.
  std::size_t i = 0;
  std::size_t j = 0;
  double prev = 0.0;  // integration starts at 0
  double l2sq = 0.0;
  double diff = 0.0;  // F_a - F_b on [prev, next)
  while (i < a.size() || j < b.size()) {
    const double next = std::min(i < a.size() ? a[i] : INFINITY, j < b.size() ? b[j] : INFINITY);
    const double lo = std::clamp(prev, 0.0, 2.0);
    const double hi = std::clamp(next, 0.0, 2.0);
    if (hi > lo) l2sq += diff * diff * (hi - lo);
    while (i < a.size() && a[i] == next) ++i;
    while (j < b.size() && b[j] == next) ++j;
    diff = static_cast<double>(i) / na - static_cast<double>(j) / nb;
    out.sup = std::max(out.sup, std::fabs(diff));
    prev = next;
  }
  // Both functions equal 1 past the last jump.
  out.l2 = std::sqrt(l2sq);
  return out;
}

EcdfDistance ecdf_compare(const EcdfResult& a, const EcdfResult& b) {
  if (a.family != b.family) throw DomainError("ecdf_compare needs results from the same family");
  return ecdf_compare(a.errors, b.errors);
}

}  // namespace ucal
