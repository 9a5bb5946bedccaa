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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ucal/estimators.hpp"

namespace ucal {

namespace {

struct PointUtility {
  double v;
  double weight;
  std::vector<double> uvec;
};

std::vector<PointUtility> evaluate_support(const FiniteDistribution& dist, const UtilitySpec& spec) {
  const PreparedUtility utility(spec, dist.num_classes());
  PreparedUtility::Scratch scratch;
  std::vector<PointUtility> out(dist.support_size());
  for (std::size_t s = 0; s < dist.support_size(); ++s) {
    out[s].uvec.resize(dist.num_classes());
    out[s].v = utility.evaluate(dist.point(s), out[s].uvec, scratch);
    out[s].weight = dist.weight(s);
  }
  return out;
}

// E[u_Y | f(X) = p_s] = <q_s, uvec(p_s)>
double expected_payoff(const FiniteDistribution& dist, std::size_t s, const PointUtility& pu) {
  const auto q = dist.label_law(s);
  double acc = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) acc += q[j] * pu.uvec[j];
  return acc;
}

}  // namespace

double population_uc(const FiniteDistribution& dist, const UtilitySpec& spec) {
  const auto points = evaluate_support(dist, spec);
  std::vector<Residual> rows(points.size());
  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto q = dist.label_law(s);
    const auto p = dist.point(s);
    double rho = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) rho += (q[j] - p[j]) * points[s].uvec[j];
    rows[s] = {points[s].v, points[s].weight * rho};
  }
  return uc_hat_from_residuals(std::move(rows), 1.0).value;
}

RiskGapResult risk_gap_check(const FiniteDistribution& dist, const UtilitySpec& spec, double t0) {
  const auto points = evaluate_support(dist, spec);

  // Loss of acting (d = 1) and of abstaining (d = 0) at each support point:
  // |u - t0| is paid whenever d differs from 1{u >= t0}.
  std::map<double, std::pair<double, double>> by_v;  // v -> (cost if d=1, cost if d=0)
  double risk_v = 0.0;
  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto q = dist.label_law(s);
    double act = 0.0;
    double abstain = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[j] == 0.0) continue;
      const double u = points[s].uvec[j];
      const double loss = points[s].weight * q[j] * std::fabs(u - t0);
      if (u >= t0) {
        abstain += loss;
      } else {
        act += loss;
      }
    }
    auto& slot = by_v[points[s].v];
    slot.first += act;
    slot.second += abstain;
    risk_v += points[s].v >= t0 ? act : abstain;
  }

  // Monotone rules act on an upper set of v: enumerate every suffix of the
  // sorted distinct values, from "act everywhere" to "never act".
  double abstain_all = 0.0;
  for (const auto& [v, c] : by_v) abstain_all += c.second;
  double best = abstain_all;
  double suffix_act = 0.0;
  double suffix_abstain = 0.0;
  for (auto it = by_v.rbegin(); it != by_v.rend(); ++it) {
    suffix_act += it->second.first;
    suffix_abstain += it->second.second;
    best = std::min(best, suffix_act + (abstain_all - suffix_abstain));
  }

  RiskGapResult out;
  out.risk_v = risk_v;
  out.risk_best_monotone = best;
  out.uc = population_uc(dist, spec);
  out.holds = out.risk_v - out.risk_best_monotone <= 2.0 * out.uc + 1e-12;
  return out;
}

DcuBoundResult dcu_bound_check(const FiniteDistribution& dist, const UtilitySpec& spec) {
  DcuBoundResult out;
  out.uc = population_uc(dist, spec);
  if (!(out.uc > 0.0)) {
    out.holds = true;
    return out;
  }
  const auto points = evaluate_support(dist, spec);
  const double width = std::sqrt(2.0 * out.uc);
  const auto num_bins = static_cast<long long>(std::ceil(2.0 / width));
  auto bin_of = [&](double v) {
    const auto b = static_cast<long long>(std::floor((v + 1.0) / width));
    return std::clamp(b, 0LL, num_bins - 1);
  };

  // g_W on each occupied bin: E[u_Y | v in bin].
  std::map<long long, std::pair<double, double>> bins;  // bin -> (mass, weighted payoff)
  for (std::size_t s = 0; s < points.size(); ++s) {
    auto& slot = bins[bin_of(points[s].v)];
    slot.first += points[s].weight;
    slot.second += points[s].weight * expected_payoff(dist, s, points[s]);
  }
  double dcu = 0.0;
  for (const auto& pt : points) {
    const auto& slot = bins[bin_of(pt.v)];
    dcu += pt.weight * std::fabs(slot.second / slot.first - pt.v);
  }
  out.dcu_upper = dcu;
  out.bound = 2.0 * width + out.uc;
  out.holds = out.dcu_upper <= out.bound + 1e-12;
  return out;
}

}  // namespace ucal
