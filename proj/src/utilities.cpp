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

#include "ucal/utilities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <string>

#include "ucal/error.hpp"
#include "ucal/simd.hpp"

namespace ucal {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

namespace {

bool rank_before(std::span<const double> p, std::size_t a, std::size_t b) {
  return p[a] > p[b] || (p[a] == p[b] && a < b);
}

void sort_by_rank(std::span<const double> p, std::vector<std::size_t>& order) {
  order.resize(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rank_before(p, a, b); });
}

void top_k_by_rank(std::span<const double> p, std::size_t k, std::vector<std::size_t>& order) {
  order.resize(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return rank_before(p, a, b); });
}

std::uint64_t fnv1a(std::span<const double> values, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (double v : values) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hashed(const char* name, std::span<const double> values) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%08llx", name,
                static_cast<unsigned long long>(fnv1a(values) & 0xffffffffULL));
  return buf;
}

void check_range(std::span<const double> values, double lo, double hi, const char* what) {
  for (double x : values) {
    if (!(x >= lo && x <= hi)) {
      throw DomainError(std::string(what) + " entry " + std::to_string(x) + " outside [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
    }
  }
}

void check_square(const Matrix& m, std::size_t C, const char* what) {
  if (m.rows() != C || m.cols() != C) {
    throw DomainError(std::string(what) + " must be " + std::to_string(C) + " x " + std::to_string(C));
  }
}

void check_unit_diagonal(const Matrix& m, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 1.0) throw DomainError(std::string(what) + " diagonal must be exactly 1");
  }
}

// out = sum_i p_i * m.row(i)
void weighted_row_sum(std::span<const double> p, const Matrix& m, std::vector<double>& out) {
  const auto& k = simd::kernels();
  out.assign(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (p[i] != 0.0) k.axpy(p[i], m.row(i).data(), out.data(), m.cols());
  }
}

// Column scores for the argmax/argmin families. Each score is the correctly
// rounded sum of the products p_i * m(i, j), so columns that tie in exact
// arithmetic over the same products compare equal and the smallest-index rule
// applies.
void exact_column_scores(std::span<const double> p, const Matrix& m, std::vector<double>& out,
                         std::vector<double>& terms) {
  out.resize(m.cols());
  terms.resize(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) terms[i] = p[i] * m(i, j);
    out[j] = fsum(terms);
  }
}

std::size_t argmin_first(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[best]) best = i;
  }
  return best;
}

}  // namespace

std::string family_name(const UtilitySpec& spec) {
  return std::visit(Overloaded{
                        [](const family::TopClass&) { return "top_class"; },
                        [](const family::ClassWise&) { return "class_wise"; },
                        [](const family::TopK&) { return "top_k"; },
                        [](const family::Rank&) { return "rank"; },
                        [](const family::Linear&) { return "linear"; },
                        [](const family::Dcg&) { return "dcg"; },
                        [](const family::Decision&) { return "decision"; },
                        [](const family::GainMatrix&) { return "gain_matrix"; },
                        [](const family::Similarity&) { return "similarity"; },
                    },
                    spec);
}

std::string utility_id(const UtilitySpec& spec) {
  return std::visit(Overloaded{
                        [](const family::TopClass&) -> std::string { return "top_class"; },
                        [](const family::ClassWise& u) { return "class_wise:" + std::to_string(u.c); },
                        [](const family::TopK& u) { return "top_k:" + std::to_string(u.k); },
                        [](const family::Rank& u) { return hashed("rank", u.theta); },
                        [](const family::Linear& u) { return hashed("linear", u.a); },
                        [](const family::Dcg& u) {
                          char buf[48];
                          std::snprintf(buf, sizeof buf, "dcg:%g", u.gamma);
                          return std::string(buf);
                        },
                        [](const family::Decision& u) { return hashed("decision", u.loss.data()); },
                        [](const family::GainMatrix& u) { return hashed("gain_matrix", u.gain.data()); },
                        [](const family::Similarity& u) { return hashed("similarity", u.sim.data()); },
                    },
                    spec);
}

void check_utility(const UtilitySpec& spec, std::size_t C) {
  std::visit(Overloaded{
                 [](const family::TopClass&) {},
                 [C](const family::ClassWise& u) {
                   if (u.c >= C) throw DomainError("class_wise class index out of range");
                 },
                 [C](const family::TopK& u) {
                   if (u.k < 1 || u.k > C) throw DomainError("top_k K must lie in [1, C]");
                 },
                 [C](const family::Rank& u) {
                   if (u.theta.size() != C) throw DomainError("rank theta length must equal C");
                   check_range(u.theta, -1.0, 1.0, "rank theta");
                 },
                 [C](const family::Linear& u) {
                   if (u.a.size() != C) throw DomainError("linear payoff length must equal C");
                   check_range(u.a, -1.0, 1.0, "linear payoff");
                 },
                 [](const family::Dcg& u) {
                   if (!(u.gamma > 0.0) || !std::isfinite(u.gamma)) throw DomainError("dcg gamma must be positive");
                 },
                 [C](const family::Decision& u) {
                   if (u.loss.rows() != C || u.loss.cols() < 1) {
                     throw DomainError("decision loss must have C rows and at least one action");
                   }
                   check_range(u.loss.data(), -1.0, 1.0, "decision loss");
                 },
                 [C](const family::GainMatrix& u) {
                   check_square(u.gain, C, "gain matrix");
                   check_range(u.gain.data(), 0.0, 1.0, "gain matrix");
                   check_unit_diagonal(u.gain, "gain matrix");
                 },
                 [C](const family::Similarity& u) {
                   check_square(u.sim, C, "similarity matrix");
                   check_range(u.sim.data(), -1.0, 1.0, "similarity matrix");
                   check_unit_diagonal(u.sim, "similarity matrix");
                 },
             },
             spec);
}

std::vector<std::size_t> rank_of(std::span<const double> p) {
  std::vector<std::size_t> order;
  sort_by_rank(p, order);
  std::vector<std::size_t> ranks(p.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
  return ranks;
}

PreparedUtility::PreparedUtility(UtilitySpec spec, std::size_t num_classes)
    : spec_(std::move(spec)), C_(num_classes) {
  if (C_ < 2) throw DomainError("utilities need at least two classes");
  check_utility(spec_, C_);
  if (const auto* r = std::get_if<family::Rank>(&spec_)) {
    theta_ = r->theta;
  } else if (const auto* d = std::get_if<family::Dcg>(&spec_)) {
    theta_.resize(C_);
    for (std::size_t r = 1; r <= C_; ++r) {
      theta_[r - 1] = std::pow(std::log2(1.0 + static_cast<double>(r)), -d->gamma);
    }
  }
}

double PreparedUtility::evaluate(std::span<const double> p, std::span<double> uvec, Scratch& scratch) const {
  if (p.size() != C_ || uvec.size() != C_) throw DomainError("prediction length does not match utility");
  const auto& k = simd::kernels();
  std::fill(uvec.begin(), uvec.end(), 0.0);
  return std::visit(
      Overloaded{
          [&](const family::TopClass&) {
            const std::size_t j = k.argmax(p.data(), C_);
            uvec[j] = 1.0;
            return p[j];
          },
          [&](const family::ClassWise& u) {
            uvec[u.c] = 1.0;
            return p[u.c];
          },
          [&](const family::TopK& u) {
            top_k_by_rank(p, u.k, scratch.order);
            double v = 0.0;
            for (std::size_t r = 0; r < u.k; ++r) {
              uvec[scratch.order[r]] = 1.0;
              v += p[scratch.order[r]];
            }
            return v;
          },
          [&](const auto& u) -> double {
            using T = std::decay_t<decltype(u)>;
            if constexpr (std::is_same_v<T, family::Rank> || std::is_same_v<T, family::Dcg>) {
              sort_by_rank(p, scratch.order);
              for (std::size_t r = 0; r < C_; ++r) uvec[scratch.order[r]] = theta_[r];
              return k.dot(p.data(), uvec.data(), C_);
            } else if constexpr (std::is_same_v<T, family::Linear>) {
              std::copy(u.a.begin(), u.a.end(), uvec.begin());
              return k.dot(p.data(), u.a.data(), C_);
            } else if constexpr (std::is_same_v<T, family::Decision>) {
              exact_column_scores(p, u.loss, scratch.buffer, scratch.terms);
              const std::size_t act = argmin_first(scratch.buffer);
              for (std::size_t j = 0; j < C_; ++j) uvec[j] = -u.loss(j, act);
              return -scratch.buffer[act];
            } else if constexpr (std::is_same_v<T, family::GainMatrix>) {
              exact_column_scores(p, u.gain, scratch.buffer, scratch.terms);
              const std::size_t pick = k.argmax(scratch.buffer.data(), C_);
              for (std::size_t i = 0; i < C_; ++i) uvec[i] = u.gain(i, pick);
              return scratch.buffer[pick];
            } else {
              static_assert(std::is_same_v<T, family::Similarity>);
              weighted_row_sum(p, u.sim, scratch.buffer);
              std::copy(scratch.buffer.begin(), scratch.buffer.end(), uvec.begin());
              return k.dot(p.data(), uvec.data(), C_);
            }
          },
      },
      spec_);
}

PreparedUtility::Point PreparedUtility::evaluate_at(std::span<const double> p, std::size_t label,
                                                    Scratch& scratch) const {
  if (p.size() != C_) throw DomainError("prediction length does not match utility");
  const auto& k = simd::kernels();
  return std::visit(
      Overloaded{
          [&](const family::TopClass&) {
            const std::size_t j = k.argmax(p.data(), C_);
            return Point{p[j], j == label ? 1.0 : 0.0};
          },
          [&](const family::ClassWise& u) { return Point{p[u.c], u.c == label ? 1.0 : 0.0}; },
          [&](const family::TopK& u) {
            top_k_by_rank(p, u.k, scratch.order);
            double v = 0.0;
            double payoff = 0.0;
            for (std::size_t r = 0; r < u.k; ++r) {
              v += p[scratch.order[r]];
              if (scratch.order[r] == label) payoff = 1.0;
            }
            return Point{v, payoff};
          },
          [&](const family::Linear& u) { return Point{k.dot(p.data(), u.a.data(), C_), u.a[label]}; },
          [&](const auto&) {
            scratch.uvec.resize(C_);
            const double v = evaluate(p, scratch.uvec, scratch);
            return Point{v, scratch.uvec[label]};
          },
      },
      spec_);
}

UtilityEvaluation eval_utility(const UtilitySpec& spec, std::span<const double> p) {
  PreparedUtility prepared(spec, p.size());
  PreparedUtility::Scratch scratch;
  UtilityEvaluation out;
  out.uvec.resize(p.size());
  out.v = prepared.evaluate(p, out.uvec, scratch);
  return out;
}

family::Linear sample_linear(std::size_t C, SeedStream& rng) {
  if (C < 2) throw DomainError("sample_linear needs C >= 2");
  const std::uint64_t face = rng.below(2 * C);
  const std::size_t axis = static_cast<std::size_t>(face / 2);
  const double sign = face % 2 == 0 ? 1.0 : -1.0;
  family::Linear out;
  out.a.resize(C);
  for (std::size_t j = 0; j < C; ++j) out.a[j] = j == axis ? sign : rng.uniform(-1.0, 1.0);
  return out;
}

family::Rank sample_rank(std::size_t C, SeedStream& rng) {
  family::Rank out{sample_linear(C, rng).a};
  std::sort(out.theta.begin(), out.theta.end(), std::greater<>());
  return out;
}

family::Decision sample_decision(std::size_t C, std::size_t K, SeedStream& rng) {
  if (K < 2) throw DomainError("sample_decision needs at least two actions");
  if (C < 2) throw DomainError("sample_decision needs C >= 2");
  Matrix loss(C, K);
  for (double& x : loss.data()) x = rng.uniform(-1.0, 1.0);
  return {std::move(loss)};
}

family::GainMatrix gain_matrix_aligned(std::size_t C, SeedStream& rng) {
  if (C < 2) throw DomainError("gain matrix needs C >= 2");
  Matrix gain(C, C);
  for (std::size_t i = 0; i < C; ++i) {
    for (std::size_t j = 0; j < C; ++j) {
      if (i == j) {
        gain(i, j) = 1.0;
        continue;
      }
      // Open interval (0, 0.1): redraw the measure-zero endpoint.
      double x = 0.0;
      while (x == 0.0) x = rng.uniform(0.0, 0.1);
      gain(i, j) = x;
    }
  }
  return {std::move(gain)};
}

family::GainMatrix gain_matrix_misaligned(std::size_t C, const std::vector<std::vector<std::size_t>>& partition,
                                          std::size_t block_index) {
  if (C < 2) throw DomainError("gain matrix needs C >= 2");
  std::vector<char> seen(C, 0);
  for (const auto& block : partition) {
    for (std::size_t j : block) {
      if (j >= C) throw DomainError("partition class index out of range");
      if (seen[j]) throw DomainError("partition blocks overlap at class " + std::to_string(j));
      seen[j] = 1;
    }
  }
  if (block_index >= partition.size()) throw DomainError("specialist block index out of range");
  Matrix gain(C, C);
  for (std::size_t i = 0; i < C; ++i) gain(i, i) = 1.0;
  for (std::size_t j : partition[block_index]) {
    for (std::size_t i = 0; i < C; ++i) {
      if (i != j) gain(i, j) = 0.2;
    }
  }
  return {std::move(gain)};
}

family::GainMatrix gain_matrix_misaligned(std::size_t C, const std::vector<std::vector<std::size_t>>& partition,
                                          SeedStream& rng) {
  if (partition.empty()) throw DomainError("partition must have at least one block");
  return gain_matrix_misaligned(C, partition, static_cast<std::size_t>(rng.below(partition.size())));
}

std::vector<UtilitySpec> comb_pool(std::size_t C) {
  if (C < 2) throw DomainError("comb_pool needs C >= 2");
  std::vector<UtilitySpec> pool;
  pool.reserve(2 * C);
  for (std::size_t c = 0; c < C; ++c) pool.emplace_back(family::ClassWise{c});
  for (std::size_t k = 1; k <= C; ++k) pool.emplace_back(family::TopK{k});
  return pool;
}

std::vector<UtilitySpec> dcg_pool() {
  std::vector<UtilitySpec> pool;
  for (double g : kDcgGammaGrid) pool.emplace_back(family::Dcg{g});
  return pool;
}

}  // namespace ucal
