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
#include <utility>
#include <vector>

#include "ucal/numeric.hpp"

namespace ucal {

using Label = std::uint32_t;

// Row sums of externally loaded predictions may deviate from 1 by this much.
inline constexpr double kInputSimplexTol = 1e-6;
// Row-sum deviation above which validation fails outright.
inline constexpr double kFatalRowSumTol = 1e-3;
// Entries below -kFatalNegativeTol fail validation.
inline constexpr double kFatalNegativeTol = 1e-6;
// Tolerance for internally constructed simplex objects.
inline constexpr double kInternalSimplexTol = 1e-12;

// The empirical sample: n prediction vectors (rows of an n x C matrix) and
// the observed class of each row. Only shape is checked on construction;
// simplex membership is the job of validate().
class LabeledPredictions {
 public:
  LabeledPredictions() = default;
  LabeledPredictions(Matrix probs, std::vector<Label> labels);

  std::size_t size() const { return probs_.rows(); }
  std::size_t num_classes() const { return probs_.cols(); }

  const Matrix& probs() const { return probs_; }
  std::span<const Label> labels() const { return labels_; }
  std::span<const double> row(std::size_t i) const { return probs_.row(i); }
  Label label(std::size_t i) const { return labels_[i]; }

  // Rows (and labels) at the given indices, in that order.
  LabeledPredictions subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const LabeledPredictions&, const LabeledPredictions&) = default;

 private:
  Matrix probs_;
  std::vector<Label> labels_;
};

struct ValidationReport {
  double max_row_sum_deviation = 0.0;
  std::size_t worst_row = 0;
  double min_entry = 0.0;
  std::size_t label_violations = 0;
  // Rows whose sum deviates from 1 by more than kInputSimplexTol.
  std::size_t rows_outside_tolerance = 0;
  bool renormalized = false;
  // Data as it should be used downstream: entries clamped to [0, 1] and,
  // when renormalization was requested, rows rescaled to sum to 1.
  LabeledPredictions corrected;
};

// Checks the simplex and label invariants. Throws ValidationError on label
// range violations, and on row-sum deviations above kFatalRowSumTol or
// entries below -kFatalNegativeTol unless `renormalize` is set.
ValidationReport validate(const LabeledPredictions& preds, bool renormalize);

struct SplitResult {
  LabeledPredictions calibration;
  LabeledPredictions test;
  std::vector<std::size_t> calibration_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double fraction = 0.0;
};

// Seeded Fisher-Yates shuffle; the first round(fraction * n) shuffled rows
// form the calibration part (clamped so that both parts are non-empty).
SplitResult split(const LabeledPredictions& preds, double fraction, std::uint64_t seed);

// Finite-support population: prediction vectors p_s with probabilities pi_s
// and label law q_s = P(Y = . | f(X) = p_s).
class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  // Throws DomainError when the invariants fail at kInternalSimplexTol.
  FiniteDistribution(Matrix support, std::vector<double> weights, Matrix cond_label);

  std::size_t support_size() const { return support_.rows(); }
  std::size_t num_classes() const { return support_.cols(); }
  const Matrix& support() const { return support_; }
  std::span<const double> weights() const { return weights_; }
  const Matrix& cond_label() const { return cond_label_; }
  std::span<const double> point(std::size_t s) const { return support_.row(s); }
  std::span<const double> label_law(std::size_t s) const { return cond_label_.row(s); }
  double weight(std::size_t s) const { return weights_[s]; }

  friend bool operator==(const FiniteDistribution&, const FiniteDistribution&) = default;

 private:
  Matrix support_;
  std::vector<double> weights_;
  Matrix cond_label_;
};

// Two groups of n_per_group identical rows: (0.45, 0.275, 0.275) with 5% of
// labels equal to class 0 and (0.55, 0.225, 0.225) with 95%; all other labels
// are class 1. Rows alternate between the groups.
LabeledPredictions gen_two_point(std::size_t n_per_group);

// The population behind gen_two_point.
FiniteDistribution two_point_population();

// Perfectly calibrated law: support points uniform on the simplex, q_s = p_s,
// uniform weights; returns n samples drawn from it together with the law.
std::pair<LabeledPredictions, FiniteDistribution> gen_calibrated(std::size_t n, std::size_t num_classes,
                                                                 std::size_t support_size,
                                                                 std::uint64_t seed);

// n samples from an arbitrary finite law.
std::pair<LabeledPredictions, FiniteDistribution> gen_miscalibrated(const FiniteDistribution& dist,
                                                                    std::size_t n, std::uint64_t seed);

}  // namespace ucal
