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

#include "ucal/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ucal/error.hpp"
#include "ucal/rng.hpp"

namespace ucal {

LabeledPredictions::LabeledPredictions(Matrix probs, std::vector<Label> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
  if (probs_.rows() == 0) throw DomainError("predictions must have at least one row");
  if (probs_.cols() < 2) throw DomainError("predictions must have at least two classes");
  if (labels_.size() != probs_.rows()) {
    throw DomainError("label count " + std::to_string(labels_.size()) + " does not match row count " +
                      std::to_string(probs_.rows()));
  }
}

LabeledPredictions LabeledPredictions::subset(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), num_classes());
  std::vector<Label> labels(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = row(indices[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
    labels[k] = labels_[indices[k]];
  }
  return {std::move(out), std::move(labels)};
}

ValidationReport validate(const LabeledPredictions& preds, bool renormalize) {
  const std::size_t n = preds.size();
  const std::size_t C = preds.num_classes();
  ValidationReport report;
  report.min_entry = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < n; ++i) {
    const auto p = preds.row(i);
    double sum = 0.0;
    for (double x : p) {
      if (!std::isfinite(x)) {
        throw ValidationError("row " + std::to_string(i) + " contains a non-finite entry");
      }
      sum += x;
      report.min_entry = std::min(report.min_entry, x);
    }
    const double dev = std::fabs(sum - 1.0);
    if (dev > report.max_row_sum_deviation) {
      report.max_row_sum_deviation = dev;
      report.worst_row = i;
    }
    if (dev > kInputSimplexTol) ++report.rows_outside_tolerance;
    if (preds.label(i) >= C) ++report.label_violations;
  }

  if (report.label_violations > 0) {
    throw ValidationError(std::to_string(report.label_violations) + " label(s) outside [0, " +
                          std::to_string(C - 1) + "]");
  }
  if (!renormalize) {
    if (report.max_row_sum_deviation > kFatalRowSumTol) {
      throw ValidationError("row " + std::to_string(report.worst_row) + " sums to 1 +/- " +
                            std::to_string(report.max_row_sum_deviation) + ", above tolerance " +
                            std::to_string(kFatalRowSumTol));
    }
    if (report.min_entry < -kFatalNegativeTol) {
      throw ValidationError("negative probability " + std::to_string(report.min_entry));
    }
  }

  Matrix fixed = preds.probs();
  for (std::size_t i = 0; i < n; ++i) {
    auto p = fixed.row(i);
    for (double& x : p) x = std::clamp(x, 0.0, 1.0);
    if (renormalize) {
      const double sum = std::accumulate(p.begin(), p.end(), 0.0);
      if (!(sum > 0.0)) throw ValidationError("row " + std::to_string(i) + " has no positive mass");
      for (double& x : p) x /= sum;
    }
  }
  report.renormalized = renormalize;
  report.corrected = LabeledPredictions(std::move(fixed),
                                        std::vector<Label>(preds.labels().begin(), preds.labels().end()));
  return report;
}

SplitResult split(const LabeledPredictions& preds, double fraction, std::uint64_t seed) {
  const std::size_t n = preds.size();
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("split fraction must lie in (0, 1)");
  if (n < 2) throw DomainError("split needs at least two rows");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SeedStream rng(seed, StreamTag::Split, 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(perm[i], perm[j]);
  }

  auto n_cal = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  n_cal = std::clamp<std::size_t>(n_cal, 1, n - 1);

  SplitResult out;
  out.calibration_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_cal));
  out.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_cal), perm.end());
  out.calibration = preds.subset(out.calibration_indices);
  out.test = preds.subset(out.test_indices);
  out.seed = seed;
  out.fraction = fraction;
  return out;
}

namespace {

void check_simplex(std::span<const double> p, const char* what, std::size_t s) {
  for (double x : p) {
    if (!std::isfinite(x) || x < -kInternalSimplexTol) {
      throw DomainError(std::string(what) + " " + std::to_string(s) + " has an entry outside [0, 1]");
    }
  }
  if (std::fabs(fsum(p) - 1.0) > kInternalSimplexTol) {
    throw DomainError(std::string(what) + " " + std::to_string(s) + " does not sum to 1");
  }
}

// Index of the category drawn by inversion of the cumulative law.
std::size_t draw_category(std::span<const double> law, double u) {
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < law.size(); ++j) {
    if (law[j] <= 0.0) continue;
    last_positive = j;
    cum += law[j];
    if (u < cum) return j;
  }
  return last_positive;
}

LabeledPredictions sample_from(const FiniteDistribution& dist, std::size_t n, SeedStream& rng) {
  if (n == 0) throw DomainError("sample size must be positive");
  const std::size_t C = dist.num_classes();
  // Running sums in the same order as draw_category, so a binary search picks
  // the same support point as the linear scan would. All weights are positive.
  std::vector<double> cum(dist.support_size());
  double running = 0.0;
  for (std::size_t s = 0; s < cum.size(); ++s) cum[s] = running += dist.weight(s);
  Matrix probs(n, C);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::upper_bound(cum.begin(), cum.end(), rng.uniform());
    const std::size_t s = it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
    const auto p = dist.point(s);
    std::copy(p.begin(), p.end(), probs.row(i).begin());
    labels[i] = static_cast<Label>(draw_category(dist.label_law(s), rng.uniform()));
  }
  return {std::move(probs), std::move(labels)};
}

}  // namespace

FiniteDistribution::FiniteDistribution(Matrix support, std::vector<double> weights, Matrix cond_label)
    : support_(std::move(support)), weights_(std::move(weights)), cond_label_(std::move(cond_label)) {
  const std::size_t S = support_.rows();
  if (S == 0) throw DomainError("finite distribution needs at least one support point");
  if (support_.cols() < 2) throw DomainError("finite distribution needs at least two classes");
  if (weights_.size() != S) throw DomainError("weights length does not match support size");
  if (cond_label_.rows() != S || cond_label_.cols() != support_.cols()) {
    throw DomainError("cond_label shape does not match support");
  }
  for (std::size_t s = 0; s < S; ++s) {
    if (!(weights_[s] > 0.0)) throw DomainError("support weight " + std::to_string(s) + " is not positive");
    check_simplex(support_.row(s), "support point", s);
    check_simplex(cond_label_.row(s), "label law", s);
  }
  if (std::fabs(fsum(weights_) - 1.0) > kInternalSimplexTol) throw DomainError("support weights do not sum to 1");

  // Coinciding points (max-norm within tolerance) must also be close in the
  // first coordinate, so a sweep over that coordinate finds every pair.
  std::vector<std::size_t> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support_(a, 0) < support_(b, 0); });
  for (std::size_t x = 0; x < S; ++x) {
    for (std::size_t y = x + 1; y < S && support_(order[y], 0) - support_(order[x], 0) <= kInternalSimplexTol; ++y) {
      double dist = 0.0;
      for (std::size_t j = 0; j < support_.cols(); ++j) {
        dist = std::max(dist, std::fabs(support_(order[x], j) - support_(order[y], j)));
      }
      if (dist <= kInternalSimplexTol) {
        throw DomainError("support points " + std::to_string(std::min(order[x], order[y])) + " and " +
                          std::to_string(std::max(order[x], order[y])) + " coincide");
      }
    }
  }
}

LabeledPredictions gen_two_point(std::size_t n_per_group) {
  if (n_per_group < 20 || n_per_group % 20 != 0) {
    throw DomainError("n_per_group must be a positive multiple of 20");
  }
  Matrix probs(2 * n_per_group, 3);
  std::vector<Label> labels(2 * n_per_group);
  for (std::size_t k = 0; k < n_per_group; ++k) {
    const std::size_t a = 2 * k;
    const std::size_t b = 2 * k + 1;
    probs(a, 0) = 0.45;
    probs(a, 1) = 0.275;
    probs(a, 2) = 0.275;
    probs(b, 0) = 0.55;
    probs(b, 1) = 0.225;
    probs(b, 2) = 0.225;
    // One in twenty rows of each group is the exception.
    const bool exception = k % 20 == 0;
    labels[a] = exception ? 0 : 1;
    labels[b] = exception ? 1 : 0;
  }
  return {std::move(probs), std::move(labels)};
}

FiniteDistribution two_point_population() {
  Matrix support = Matrix::from_rows({{0.45, 0.275, 0.275}, {0.55, 0.225, 0.225}});
  Matrix cond = Matrix::from_rows({{0.05, 0.95, 0.0}, {0.95, 0.05, 0.0}});
  return {std::move(support), {0.5, 0.5}, std::move(cond)};
}

std::pair<LabeledPredictions, FiniteDistribution> gen_calibrated(std::size_t n, std::size_t num_classes,
                                                                 std::size_t support_size,
                                                                 std::uint64_t seed) {
  if (support_size == 0) throw DomainError("support_size must be at least 1");
  if (num_classes < 2) throw DomainError("need at least two classes");
  SeedStream rng(seed, StreamTag::Synth, 0);
  Matrix support(support_size, num_classes);
  for (std::size_t s = 0; s < support_size; ++s) {
    auto p = support.row(s);
    double total = 0.0;
    for (double& x : p) {
      x = rng.exponential();
      total += x;
    }
    for (double& x : p) x /= total;
  }
  std::vector<double> weights(support_size, 1.0 / static_cast<double>(support_size));
  Matrix cond = support;
  FiniteDistribution dist(std::move(support), std::move(weights), std::move(cond));
  SeedStream sampler(seed, StreamTag::Synth, 1);
  LabeledPredictions sample = sample_from(dist, n, sampler);
  return {std::move(sample), std::move(dist)};
}

std::pair<LabeledPredictions, FiniteDistribution> gen_miscalibrated(const FiniteDistribution& dist,
                                                                    std::size_t n, std::uint64_t seed) {
  // Re-run the invariant checks: a default-constructed distribution is empty.
  FiniteDistribution checked(dist.support(), std::vector<double>(dist.weights().begin(), dist.weights().end()),
                             dist.cond_label());
  SeedStream sampler(seed, StreamTag::Synth, 1);
  LabeledPredictions sample = sample_from(checked, n, sampler);
  return {std::move(sample), std::move(checked)};
}

}  // namespace ucal
