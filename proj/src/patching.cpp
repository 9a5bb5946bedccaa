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

#include "ucal/patching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ucal/error.hpp"
#include "ucal/estimators.hpp"
#include "ucal/numeric.hpp"
#include "ucal/parallel.hpp"
#include "ucal/simd.hpp"

namespace ucal {

void project_simplex(std::span<const double> x, std::span<double> out, std::vector<double>& sorted) {
  const std::size_t C = x.size();
  sorted.assign(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Largest k with sorted[k-1] - (sum_{j<k} sorted[j] - 1) / k > 0; k = 1
  // always qualifies.
  double cum = 0.0;
  double tau = sorted[0] - 1.0;
  for (std::size_t k = 1; k <= C; ++k) {
    cum += sorted[k - 1];
    const double t = (cum - 1.0) / static_cast<double>(k);
    if (sorted[k - 1] - t > 0.0) tau = t;
  }
  simd::kernels().shift_clamp(x.data(), tau, out.data(), C);
}

std::vector<double> project_simplex(std::span<const double> x) {
  if (x.empty()) throw DomainError("cannot project an empty vector");
  std::vector<double> out(x.size());
  std::vector<double> scratch;
  project_simplex(x, out, scratch);
  return out;
}

namespace {

struct RowWorkspace {
  PreparedUtility::Scratch utility;
  std::vector<double> uvec;
  std::vector<double> moved;
  std::vector<double> sorted;
};

// In-place masked update of one row. Returns whether the row was inside the
// witness interval.
bool patch_row(std::span<double> p, const PreparedUtility& utility, const PatchRecord& rec, RowWorkspace& ws) {
  const std::size_t C = p.size();
  ws.uvec.resize(C);
  const double v = utility.evaluate(p, ws.uvec, ws.utility);
  if (!(v >= rec.lo && v <= rec.hi)) return false;
  ws.moved.assign(p.begin(), p.end());
  simd::kernels().axpy(-rec.step * static_cast<double>(rec.sign), ws.uvec.data(), ws.moved.data(), C);
  project_simplex(ws.moved, p, ws.sorted);
  return true;
}

double row_brier(std::span<const double> p, Label y) {
  return simd::kernels().sum_squares(p.data(), p.size()) - 2.0 * p[y] + 1.0;
}

double mean_of(std::span<const double> contributions) {
  return fsum(contributions) / static_cast<double>(contributions.size());
}

}  // namespace

std::vector<double> apply_patch(std::span<const double> p, const PatchRecord& record) {
  const PreparedUtility utility(record.spec, p.size());
  std::vector<double> out(p.begin(), p.end());
  RowWorkspace ws;
  patch_row(out, utility, record, ws);
  return out;
}

Witness find_worst_witness(const LabeledPredictions& preds, std::span<const UtilitySpec> pool, int threads) {
  if (pool.empty()) throw DomainError("witness pool is empty");
  std::vector<UcEstimate> estimates(pool.size());
  parallel_for(pool.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) estimates[m] = uc_hat(preds, pool[m]);
  });
  std::size_t best = 0;
  for (std::size_t m = 1; m < estimates.size(); ++m) {
    if (estimates[m].value > estimates[best].value) best = m;
  }
  // uc_hat's sign orients the residual u_Y - v; the patch direction pairs
  // with p - e_y, the opposite orientation.
  Witness w;
  w.spec = pool[best];
  w.lo = estimates[best].lo;
  w.hi = estimates[best].hi;
  w.sign = -estimates[best].sign;
  w.err = estimates[best].value;
  w.pool_index = best;
  return w;
}

std::vector<UtilitySpec> iteration_pool(const std::vector<UtilitySpec>& base, const std::optional<AugmentParams>& augment,
                                        std::size_t num_classes, std::size_t iteration) {
  std::vector<UtilitySpec> pool = base;
  if (!augment) return pool;
  pool.reserve(base.size() + augment->count);
  for (std::size_t k = 0; k < augment->count; ++k) {
    SeedStream rng(augment->seed, StreamTag::PatchAugment, iteration * augment->count + k);
    if (k % 2 == 0) {
      pool.emplace_back(sample_rank(num_classes, rng));
    } else {
      pool.emplace_back(sample_linear(num_classes, rng));
    }
  }
  return pool;
}

PatchSequence fit(const LabeledPredictions& cal, const PatchConfig& config) {
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (config.max_iters == 0) throw ConfigError("max_iters must be at least 1");
  const std::size_t n = cal.size();
  const std::size_t C = cal.num_classes();
  const auto base_pool = config.pool.empty() ? comb_pool(C) : config.pool;
  for (const auto& spec : base_pool) check_utility(spec, C);

  Matrix state = cal.probs();
  const std::vector<Label> labels(cal.labels().begin(), cal.labels().end());
  std::vector<double> contrib(n);
  for (std::size_t i = 0; i < n; ++i) contrib[i] = row_brier(state.row(i), labels[i]);

  PatchSequence seq;
  seq.num_classes = C;

  for (std::size_t iter = 0;; ++iter) {
    const LabeledPredictions current(state, labels);
    const auto pool = iteration_pool(base_pool, config.augment, C, iter);
    const Witness w = find_worst_witness(current, pool, config.threads);
    seq.final_err = w.err;
    if (w.err <= config.epsilon) {
      seq.converged = true;
      break;
    }
    if (iter == config.max_iters) break;

    PatchRecord rec{w.spec, w.lo, w.hi, w.sign, 0.0};
    const PreparedUtility utility(rec.spec, C);
    const double brier_before = mean_of(contrib);
    const double theoretical = w.err / static_cast<double>(C);

    // Payoff vectors of the rows inside the witness interval.
    std::vector<std::size_t> mask;
    std::vector<double> payoffs;
    {
      PreparedUtility::Scratch scratch;
      std::vector<double> uvec(C);
      for (std::size_t i = 0; i < n; ++i) {
        const double v = utility.evaluate(state.row(i), uvec, scratch);
        if (v >= rec.lo && v <= rec.hi) {
          mask.push_back(i);
          payoffs.insert(payoffs.end(), uvec.begin(), uvec.end());
        }
      }
    }

    // Brier contributions of the masked rows after a step of size eta,
    // written to `trial_rows` / `trial_contrib`.
    Matrix trial_rows(mask.size(), C);
    std::vector<double> trial_contrib = contrib;
    auto try_step = [&](double eta) {
      parallel_for(mask.size(), config.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> moved(C);
        std::vector<double> sorted;
        for (std::size_t k = begin; k < end; ++k) {
          const auto p = state.row(mask[k]);
          std::copy(p.begin(), p.end(), moved.begin());
          simd::kernels().axpy(-eta * static_cast<double>(rec.sign), payoffs.data() + k * C, moved.data(), C);
          project_simplex(moved, trial_rows.row(k), sorted);
          trial_contrib[mask[k]] = row_brier(trial_rows.row(k), labels[mask[k]]);
        }
      });
      return mean_of(trial_contrib);
    };

    double eta = theoretical;
    double brier_after = 0.0;
    std::size_t backtracks = 0;
    if (config.step_rule == StepRule::Armijo) {
      double norm_sum = 0.0;
      for (std::size_t k = 0; k < mask.size(); ++k) {
        norm_sum += simd::kernels().sum_squares(payoffs.data() + k * C, C);
      }
      const double mean_norm = mask.empty() ? 0.0 : norm_sum / static_cast<double>(mask.size());
      eta = mean_norm > 0.0 ? std::min(2.0, config.armijo.init_scale * w.err / mean_norm) : theoretical;
      bool accepted = false;
      for (; backtracks <= config.armijo.max_backtracks; ++backtracks) {
        brier_after = try_step(eta);
        if (brier_before - brier_after >= config.armijo.c * eta * w.err) {
          accepted = true;
          break;
        }
        eta *= config.armijo.shrink;
      }
      if (!accepted) {
        eta = theoretical;
        brier_after = try_step(eta);
      }
    } else {
      brier_after = try_step(eta);
    }

    // Commit: trial rows are exactly what patch_row produces for this record.
    rec.step = eta;
    for (std::size_t k = 0; k < mask.size(); ++k) {
      const auto src = trial_rows.row(k);
      std::copy(src.begin(), src.end(), state.row(mask[k]).begin());
    }
    contrib = std::move(trial_contrib);
    seq.records.push_back(std::move(rec));
    seq.history.push_back({w.err, brier_before, brier_after, eta, backtracks});
  }
  return seq;
}

Matrix transform(const Matrix& probs, const PatchSequence& seq, int threads) {
  if (probs.cols() != seq.num_classes) {
    throw DomainError("patch sequence expects " + std::to_string(seq.num_classes) + " classes, data has " +
                      std::to_string(probs.cols()));
  }
  std::vector<PreparedUtility> utilities;
  utilities.reserve(seq.records.size());
  for (const auto& rec : seq.records) utilities.emplace_back(rec.spec, seq.num_classes);

  Matrix out = probs;
  parallel_for(out.rows(), threads, [&](std::size_t begin, std::size_t end) {
    RowWorkspace ws;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t r = 0; r < seq.records.size(); ++r) patch_row(out.row(i), utilities[r], seq.records[r], ws);
    }
  });
  return out;
}

LabeledPredictions transform(const LabeledPredictions& preds, const PatchSequence& seq, int threads) {
  return {transform(preds.probs(), seq, threads), std::vector<Label>(preds.labels().begin(), preds.labels().end())};
}

}  // namespace ucal
