// Copyright 2026 The answerlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANSWERLEARN_POLICY_HPP_
#define ANSWERLEARN_POLICY_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "answerlearn/common.hpp"
#include "answerlearn/model_class.hpp"
#include "answerlearn/rational.hpp"
#include "answerlearn/rng.hpp"

namespace answerlearn {

// D over contexts with exact rational masses summing to 1.
class ContextDistribution {
 public:
  ContextDistribution() = default;
  // Throws kInvalidArgument unless entries are non-negative and sum to 1.
  explicit ContextDistribution(std::vector<Rational> probs);

  static ContextDistribution uniform(std::size_t num_contexts);
  static ContextDistribution point_mass(std::size_t num_contexts, ContextId x);

  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](ContextId x) const { return probs_.at(index(x)); }
  const std::vector<Rational>& probs() const { return probs_; }
  bool is_uniform() const;

  ContextId sample(SplitMix64& rng) const { return context(sampler_.sample(rng)); }

 private:
  std::vector<Rational> probs_;
  DiscreteSampler sampler_;
};

struct DeterministicPolicy {
  std::vector<ActionId> action;  // indexed by context
};

struct UniformSupportPolicy {
  SupportFunction support;
};

struct TablePolicy {
  std::vector<std::vector<Rational>> probs;  // |X| rows of |Y| entries
};

// Uniform mixture of m deterministic predictors given as a prediction table.
struct MixturePolicy {
  std::vector<std::vector<ActionId>> predictions;  // [t][x]
  std::string snapshot_file;                      // optional reference
  std::uint64_t snapshot_hash = 0;
};

// Sampling-only policy; exact evaluators reject it.
struct SamplerPolicy {
  std::function<ActionId(ContextId, SplitMix64&)> sample;
  std::string name;
};

struct Policy {
  std::size_t num_contexts = 0;
  std::size_t num_actions = 0;
  std::variant<DeterministicPolicy, UniformSupportPolicy, TablePolicy, MixturePolicy, SamplerPolicy>
      kind;

  bool is_exact() const { return !std::holds_alternative<SamplerPolicy>(kind); }
};

Policy deterministic_policy(std::size_t num_actions, std::vector<ActionId> actions);
Policy uniform_support_policy(const SupportFunction& support, std::size_t num_actions);
Policy table_policy(std::vector<std::vector<Rational>> probs);
Policy mixture_policy(std::size_t num_actions, std::vector<std::vector<ActionId>> predictions);

// Exact pi(.|x). Throws kInexactPolicy for sampler policies.
std::vector<Rational> action_probs(const Policy& policy, ContextId x);
ActionId sample_action(const Policy& policy, ContextId x, SplitMix64& rng);

struct DeterministicKPolicy {
  std::vector<std::vector<ActionId>> lists;  // [x] -> k actions
};

struct MixtureKPolicy {
  std::vector<std::vector<std::vector<ActionId>>> predictions;  // [t][x] -> k actions
};

struct ListPolicy {
  std::size_t num_contexts = 0;
  std::size_t num_actions = 0;
  std::size_t k = 1;
  std::variant<DeterministicKPolicy, MixtureKPolicy> kind;
};

using WeightedTuple = std::pair<std::vector<ActionId>, Rational>;

// Distribution over emitted k-tuples at x; equal tuples are merged.
std::vector<WeightedTuple> tuple_distribution(const ListPolicy& mu, ContextId x);

// Policy whose action is the first (only) tuple entry; requires k == 1.
Policy induced_policy(const ListPolicy& mu);

Rational loss_exact(const Policy& policy, const ContextDistribution& d, const SupportFunction& truth);
Rational value_exact(const Policy& policy, const ContextDistribution& d, const RewardFunction& r);
Rational passk_loss_exact(const ListPolicy& mu, const ContextDistribution& d,
                          const SupportFunction& truth);
Rational passk_value_exact(const ListPolicy& mu, const ContextDistribution& d,
                           const RewardFunction& r);

// E_x[max_y r(x, y)]
Rational optimal_value(const ContextDistribution& d, const RewardFunction& r);

struct McEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t failures = 0;
  std::uint64_t samples = 0;
};

// Two-sided Clopper-Pearson interval at the given confidence.
std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t n,
                                          double confidence = 0.95);

McEstimate loss_mc(const Policy& policy, const ContextDistribution& d, const SupportFunction& truth,
                   std::uint64_t n, std::uint64_t seed);

}  // namespace answerlearn

#endif  // ANSWERLEARN_POLICY_HPP_
