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

#include "ucal/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucal/error.hpp"
#include "ucal/numeric.hpp"
#include "ucal/parallel.hpp"
#include "ucal/simd.hpp"

namespace ucal {

std::vector<Residual> residuals(const LabeledPredictions& preds, const UtilitySpec& spec, int threads) {
  const PreparedUtility utility(spec, preds.num_classes());
  std::vector<Residual> out(preds.size());
  parallel_for(preds.size(), threads, [&](std::size_t begin, std::size_t end) {
    PreparedUtility::Scratch scratch;
    for (std::size_t i = begin; i < end; ++i) {
      const auto pt = utility.evaluate_at(preds.row(i), preds.label(i), scratch);
      const double r = pt.payoff - pt.v;
      // TwoSum error term of payoff + (-v).
      const double bv = r - pt.payoff;
      const double e = (pt.payoff - (r - bv)) + (-pt.v - bv);
      out[i] = {pt.v, r, e};
    }
  });
  return out;
}

UcEstimate uc_hat_from_residuals(std::vector<Residual> rows, double normalizer) {
  UcEstimate est;
  if (rows.empty()) return est;
  // Prefix sums are exact and rounded once per block, so ties between
  // intervals of equal value are decided by the data rather than by
  // summation noise, and the result does not depend on row order.
  std::sort(rows.begin(), rows.end(), [](const Residual& a, const Residual& b) { return a.v < b.v; });

  std::vector<double> block_v;
  ExactAccumulator acc;
  double max_prefix = 0.0;
  double min_prefix = 0.0;
  std::size_t argmax = 0;  // prefix index k: sum of the first k blocks
  std::size_t argmin = 0;
  std::size_t i = 0;
  while (i < rows.size()) {
    const double v = rows[i].v;
    for (; i < rows.size() && rows[i].v == v; ++i) {
      acc.add(rows[i].r);
      acc.add(rows[i].e);
    }
    block_v.push_back(v);
    const double prefix = acc.result();
    const std::size_t k = block_v.size();
    if (prefix > max_prefix) {
      max_prefix = prefix;
      argmax = k;
    }
    if (prefix < min_prefix) {
      min_prefix = prefix;
      argmin = k;
    }
  }

  est.value = (max_prefix - min_prefix) / normalizer;
  if (argmin < argmax) {
    est.lo = block_v[argmin];
    est.hi = block_v[argmax - 1];
    est.sign = 1;
  } else if (argmax < argmin) {
    est.lo = block_v[argmax];
    est.hi = block_v[argmin - 1];
    est.sign = -1;
  } else {
    // All prefix sums vanish: every block sums to zero.
    est.value = 0.0;
    est.lo = est.hi = block_v.front();
    est.sign = 1;
  }
  return est;
}

UcEstimate uc_hat(const LabeledPredictions& preds, const UtilitySpec& spec, int threads) {
  return uc_hat_from_residuals(residuals(preds, spec, threads), static_cast<double>(preds.size()));
}

double uc_hat_oracle(std::span<const Residual> rows, double normalizer) {
  if (rows.size() > kOracleMaxRows) {
    throw GuardError("uc_hat_oracle is limited to " + std::to_string(kOracleMaxRows) + " rows");
  }
  std::vector<Residual> sorted(rows.begin(), rows.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Residual& a, const Residual& b) { return a.v < b.v; });
  // Start of each run of equal values.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i].v != sorted[i - 1].v) starts.push_back(i);
  }
  starts.push_back(sorted.size());

  double best = 0.0;  // the empty interval
  for (std::size_t a = 0; a + 1 < starts.size(); ++a) {
    double running = 0.0;
    for (std::size_t b = a; b + 1 < starts.size(); ++b) {
      for (std::size_t i = starts[b]; i < starts[b + 1]; ++i) running += sorted[i].r;
      best = std::max(best, std::fabs(running));
    }
  }
  return best / normalizer;
}

double uc_hat_oracle(const LabeledPredictions& preds, const UtilitySpec& spec) {
  if (preds.size() > kOracleMaxRows) {
    throw GuardError("uc_hat_oracle is limited to " + std::to_string(kOracleMaxRows) + " rows");
  }
  const auto rows = residuals(preds, spec);
  return uc_hat_oracle(rows, static_cast<double>(preds.size()));
}

BinScheme BinScheme::equal_width(std::size_t m, double lo, double hi) {
  if (m == 0) throw DomainError("need at least one bin");
  if (!(hi > lo)) throw DomainError("equal-width bins need hi > lo");
  std::vector<double> edges(m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    edges[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(m);
  }
  edges[m] = hi;
  return {BinKind::EqualWidth, std::move(edges)};
}

BinScheme BinScheme::equal_weight(std::span<const double> values, std::size_t m) {
  if (m == 0) throw DomainError("need at least one bin");
  if (values.empty()) throw DomainError("equal-weight bins need data");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> edges{sorted.front()};
  for (std::size_t j = 1; j < m; ++j) {
    const std::size_t pos = (n * j + m - 1) / m;
    if (pos >= n) break;
    if (sorted[pos] != edges.back()) edges.push_back(sorted[pos]);
  }
  edges.push_back(sorted.back());
  return {BinKind::EqualWeight, std::move(edges)};
}

BinScheme BinScheme::build(BinKind kind, std::span<const double> values, std::size_t m) {
  return kind == BinKind::EqualWidth ? equal_width(m) : equal_weight(values, m);
}

std::size_t BinScheme::bin_of(double x) const {
  // Interior edges e_1 .. e_{m-1} that are <= x.
  const auto first = edges_.begin() + 1;
  const auto last = edges_.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

std::vector<double> top_class_confidences(const LabeledPredictions& preds) {
  const auto& k = simd::kernels();
  std::vector<double> conf(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto p = preds.row(i);
    conf[i] = p[k.argmax(p.data(), p.size())];
  }
  return conf;
}

namespace {

// sum_j |(1/n) sum_{i in bin j} (value_i - hit_i)|, with the value sums done
// exactly and hits counted as integers.
double binned_error(std::span<const double> values, const std::vector<char>& hits, const BinScheme& scheme) {
  std::vector<ExactAccumulator> mass(scheme.num_bins());
  std::vector<std::size_t> count(scheme.num_bins(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t b = scheme.bin_of(values[i]);
    mass[b].add(values[i]);
    count[b] += hits[i] ? 1 : 0;
  }
  const double n = static_cast<double>(values.size());
  double total = 0.0;
  for (std::size_t b = 0; b < mass.size(); ++b) {
    total += std::fabs(mass[b].result() - static_cast<double>(count[b])) / n;
  }
  return total;
}

}  // namespace

double tce_binned(const LabeledPredictions& preds, const BinScheme& scheme) {
  const auto& k = simd::kernels();
  std::vector<double> conf(preds.size());
  std::vector<char> correct(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto p = preds.row(i);
    const std::size_t j = k.argmax(p.data(), p.size());
    conf[i] = p[j];
    correct[i] = j == preds.label(i);
  }
  return binned_error(conf, correct, scheme);
}

double tce_binned(const LabeledPredictions& preds, BinKind kind, std::size_t m) {
  const auto conf = top_class_confidences(preds);
  return tce_binned(preds, BinScheme::build(kind, conf, m));
}

std::vector<double> uniform_class_weights(std::size_t C) {
  return std::vector<double>(C, 1.0 / static_cast<double>(C));
}

std::vector<double> empirical_class_weights(const LabeledPredictions& preds) {
  std::vector<double> w(preds.num_classes(), 0.0);
  for (Label y : preds.labels()) w[y] += 1.0;
  for (double& x : w) x /= static_cast<double>(preds.size());
  return w;
}

double cwe_binned(const LabeledPredictions& preds, BinKind kind, std::size_t m, std::span<const double> weights) {
  const std::size_t C = preds.num_classes();
  if (weights.size() != C) throw DomainError("class weight vector must have length C");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("class weights must be non-negative");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > 1e-9) throw DomainError("class weights must sum to 1");

  std::vector<double> column(preds.size());
  std::vector<char> hit(preds.size());
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    if (weights[c] == 0.0) continue;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      column[i] = preds.row(i)[c];
      hit[i] = preds.label(i) == c;
    }
    total += weights[c] * binned_error(column, hit, BinScheme::build(kind, column, m));
  }
  return total;
}

double brier(const LabeledPredictions& preds) {
  const auto& k = simd::kernels();
  ExactAccumulator acc;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto p = preds.row(i);
    // ||e_y - p||^2 = ||p||^2 - 2 p_y + 1
    acc.add(k.sum_squares(p.data(), p.size()) - 2.0 * p[preds.label(i)] + 1.0);
  }
  return acc.result() / static_cast<double>(preds.size());
}

double accuracy(const LabeledPredictions& preds) {
  const auto& k = simd::kernels();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto p = preds.row(i);
    hits += k.argmax(p.data(), p.size()) == preds.label(i) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

MetricReport evaluate_report(const LabeledPredictions& preds,
                             const std::vector<std::pair<std::string, UtilitySpec>>& utilities,
                             const ReportOptions& options) {
  MetricReport report;
  report.accuracy = accuracy(preds);
  report.brier = brier(preds);
  report.tce_binned = tce_binned(preds, options.bin_kind, options.bins);
  const auto weights = options.empirical_class_weights ? empirical_class_weights(preds)
                                                       : uniform_class_weights(preds.num_classes());
  report.cwe_binned = cwe_binned(preds, options.bin_kind, options.bins, weights);

  for (const auto& [label, spec] : utilities) report.uc[label] = uc_hat(preds, spec, options.threads);

  const auto pool = comb_pool(preds.num_classes());
  std::vector<double> values(pool.size());
  parallel_for(pool.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) values[m] = uc_hat(preds, pool[m]).value;
  });
  report.uc_comb = *std::max_element(values.begin(), values.end());
  return report;
}

}  // namespace ucal
