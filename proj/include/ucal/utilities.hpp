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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ucal/numeric.hpp"
#include "ucal/rng.hpp"

namespace ucal {

// Utility families. Each maps a prediction p and an outcome class j to a
// payoff u(p, e_j) in [-1, 1].
namespace family {

// Payoff 1 for the arg-max class.
struct TopClass {
  friend bool operator==(const TopClass&, const TopClass&) = default;
};
// Payoff 1 for one fixed class.
struct ClassWise {
  std::size_t c = 0;
  friend bool operator==(const ClassWise&, const ClassWise&) = default;
};
// Payoff 1 when the outcome ranks among the k most probable classes.
struct TopK {
  std::size_t k = 1;
  friend bool operator==(const TopK&, const TopK&) = default;
};
// Payoff theta[r - 1] when the outcome has rank r under p.
struct Rank {
  std::vector<double> theta;
  friend bool operator==(const Rank&, const Rank&) = default;
};
// Payoff a[j], independent of p.
struct Linear {
  std::vector<double> a;
  friend bool operator==(const Linear&, const Linear&) = default;
};
// Rank utility with discounts (log2(1 + r))^-gamma.
struct Dcg {
  double gamma = 1.0;
  friend bool operator==(const Dcg&, const Dcg&) = default;
};
// Negated loss of the Bayes action under p; loss is C x K (class x action).
struct Decision {
  Matrix loss;
  friend bool operator==(const Decision&, const Decision&) = default;
};
// Gain of the class an agent picks by maximizing expected gain; gain(i, j)
// is the payoff of predicting j when the truth is i.
struct GainMatrix {
  Matrix gain;
  friend bool operator==(const GainMatrix&, const GainMatrix&) = default;
};
// Expected similarity: u(p, e_j) = sum_i p_i sim(i, j).
struct Similarity {
  Matrix sim;
  friend bool operator==(const Similarity&, const Similarity&) = default;
};

}  // namespace family

using UtilitySpec = std::variant<family::TopClass, family::ClassWise, family::TopK, family::Rank,
                                 family::Linear, family::Dcg, family::Decision, family::GainMatrix,
                                 family::Similarity>;

// Family keyword as used in the JSON encoding ("top_class", "class_wise", ...).
std::string family_name(const UtilitySpec& spec);

// Short human-readable identifier, e.g. "class_wise:3" or "top_k:2".
// Parameter-heavy families get a content hash suffix.
std::string utility_id(const UtilitySpec& spec);

// Throws DomainError when the spec's parameters are out of range or do not
// fit `num_classes`.
void check_utility(const UtilitySpec& spec, std::size_t num_classes);

struct UtilityEvaluation {
  std::vector<double> uvec;  // payoff per outcome class
  double v = 0.0;            // predicted utility <p, uvec>
};

// Bijective ranks (1-based): classes ordered by (-p_j, j).
std::vector<std::size_t> rank_of(std::span<const double> p);

// A utility bound to a class count with per-family precomputation done once.
// Evaluation is pure; each thread needs its own Scratch.
class PreparedUtility {
 public:
  struct Scratch {
    std::vector<std::size_t> order;
    std::vector<double> buffer;
    std::vector<double> uvec;
    std::vector<double> terms;
  };

  PreparedUtility(UtilitySpec spec, std::size_t num_classes);

  const UtilitySpec& spec() const { return spec_; }
  std::size_t num_classes() const { return C_; }

  // Fills uvec (length C) and returns v.
  double evaluate(std::span<const double> p, std::span<double> uvec, Scratch& scratch) const;

  struct Point {
    double v;
    double payoff;  // uvec[label]
  };
  // v and the realized payoff of one outcome, without materializing uvec
  // where the family allows it.
  Point evaluate_at(std::span<const double> p, std::size_t label, Scratch& scratch) const;

 private:
  UtilitySpec spec_;
  std::size_t C_;
  std::vector<double> theta_;  // Rank / Dcg discount by rank
};

UtilityEvaluation eval_utility(const UtilitySpec& spec, std::span<const double> p);

// Samplers. Each consumes draws from the given stream only.
family::Linear sample_linear(std::size_t num_classes, SeedStream& rng);
family::Rank sample_rank(std::size_t num_classes, SeedStream& rng);
family::Decision sample_decision(std::size_t num_classes, std::size_t num_actions, SeedStream& rng);
family::GainMatrix gain_matrix_aligned(std::size_t num_classes, SeedStream& rng);
// Specialist gain matrix for `block`: gain(i, j) = 0.2 for j in the block,
// i != j; other off-diagonal entries 0. Every block of the partition must be
// disjoint from the others; `block_index` selects the specialist.
family::GainMatrix gain_matrix_misaligned(std::size_t num_classes,
                                          const std::vector<std::vector<std::size_t>>& partition,
                                          std::size_t block_index);
// A specialist drawn uniformly from the partition.
family::GainMatrix gain_matrix_misaligned(std::size_t num_classes,
                                          const std::vector<std::vector<std::size_t>>& partition,
                                          SeedStream& rng);

// Class-wise utilities for every class, then top-K for K = 1..C.
std::vector<UtilitySpec> comb_pool(std::size_t num_classes);

// The DCG utilities on the default gamma grid.
std::vector<UtilitySpec> dcg_pool();

inline constexpr double kDcgGammaGrid[] = {0.5, 0.75, 1.0, 1.25, 1.5, 2.0};

}  // namespace ucal
