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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ucal/dataset.hpp"
#include "ucal/utilities.hpp"

namespace ucal {

// Worst-interval utility calibration estimate with its witness.
struct UcEstimate {
  double value = 0.0;
  double lo = 0.0;  // witness interval [lo, hi], endpoints are observed v values
  double hi = 0.0;
  int sign = 1;     // sign * (mean residual over the interval) == value
};

struct Residual {
  double v;         // predicted utility
  double r;         // realized payoff minus predicted utility, rounded
  double e = 0.0;   // rounding error of r, so that r + e is exact
};

// Per-row predicted utility and residual u(p_i, e_{y_i}) - v_u(p_i).
std::vector<Residual> residuals(const LabeledPredictions& preds, const UtilitySpec& spec, int threads = 1);

// Exact supremum over closed intervals I of |(1/n) sum_i r_i 1{v_i in I}|:
// sort by v, merge equal v into blocks, and take the spread of the block
// prefix sums. O(n log n).
UcEstimate uc_hat(const LabeledPredictions& preds, const UtilitySpec& spec, int threads = 1);
UcEstimate uc_hat_from_residuals(std::vector<Residual> rows, double normalizer);

inline constexpr std::size_t kOracleMaxRows = 10000;

// Brute-force enumeration of all intervals between observed values. O(n^2);
// throws GuardError above kOracleMaxRows rows.
double uc_hat_oracle(const LabeledPredictions& preds, const UtilitySpec& spec);
double uc_hat_oracle(std::span<const Residual> rows, double normalizer);

enum class BinKind { EqualWidth, EqualWeight };

// Right-open bins [e_j, e_{j+1}); the last bin is closed.
class BinScheme {
 public:
  // m bins of equal width on [lo, hi].
  static BinScheme equal_width(std::size_t m, double lo = 0.0, double hi = 1.0);
  // Edges at the sorted values with 0-based positions ceil(n j / m);
  // duplicate edges are merged, so heavy ties can leave fewer than m bins.
  static BinScheme equal_weight(std::span<const double> values, std::size_t m);
  static BinScheme build(BinKind kind, std::span<const double> values, std::size_t m);

  BinKind kind() const { return kind_; }
  std::size_t num_bins() const { return edges_.size() - 1; }
  std::span<const double> edges() const { return edges_; }
  // Values outside the edge range fall into the first or last bin.
  std::size_t bin_of(double x) const;

 private:
  BinScheme(BinKind kind, std::vector<double> edges) : kind_(kind), edges_(std::move(edges)) {}
  BinKind kind_;
  std::vector<double> edges_;
};

// Top-class confidence max_j p_j of every row.
std::vector<double> top_class_confidences(const LabeledPredictions& preds);

// Binned top-class calibration error on a scheme over the confidences.
double tce_binned(const LabeledPredictions& preds, const BinScheme& scheme);
double tce_binned(const LabeledPredictions& preds, BinKind kind, std::size_t m);

// Binned class-wise calibration error; one scheme per class built on that
// class's column. Weights must be non-negative and sum to 1.
double cwe_binned(const LabeledPredictions& preds, BinKind kind, std::size_t m, std::span<const double> weights);
std::vector<double> uniform_class_weights(std::size_t num_classes);
std::vector<double> empirical_class_weights(const LabeledPredictions& preds);

double brier(const LabeledPredictions& preds);
double accuracy(const LabeledPredictions& preds);

struct MetricReport {
  double accuracy = 0.0;
  double brier = 0.0;
  double tce_binned = 0.0;
  double cwe_binned = 0.0;
  std::map<std::string, UcEstimate> uc;  // keyed by utility label
  double uc_comb = 0.0;
};

struct ReportOptions {
  BinKind bin_kind = BinKind::EqualWeight;
  std::size_t bins = 15;
  bool empirical_class_weights = false;
  int threads = 1;
};

// `utilities` pairs a report label with a spec. uc_comb is the maximum over
// comb_pool(C), computed whether or not the pool is listed.
MetricReport evaluate_report(const LabeledPredictions& preds,
                             const std::vector<std::pair<std::string, UtilitySpec>>& utilities,
                             const ReportOptions& options);

// ---- exact population quantities on finite-support laws ----

// Population utility calibration of `spec` under `dist`.
double population_uc(const FiniteDistribution& dist, const UtilitySpec& spec);

struct RiskGapResult {
  double risk_v = 0.0;               // risk of the rule 1{v >= t0}
  double risk_best_monotone = 0.0;   // best threshold rule on v
  double uc = 0.0;
  bool holds = false;                // risk_v - best <= 2 uc (+1e-12)
};

RiskGapResult risk_gap_check(const FiniteDistribution& dist, const UtilitySpec& spec, double t0);

struct DcuBoundResult {
  double dcu_upper = 0.0;  // E|g_W - v| for the bin-averaged predictor g_W
  double bound = 0.0;      // 2 sqrt(2 uc) + uc
  double uc = 0.0;
  bool holds = false;
};

DcuBoundResult dcu_bound_check(const FiniteDistribution& dist, const UtilitySpec& spec);

}  // namespace ucal
