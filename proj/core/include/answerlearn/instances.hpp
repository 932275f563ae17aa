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

#ifndef ANSWERLEARN_INSTANCES_HPP_
#define ANSWERLEARN_INSTANCES_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "answerlearn/model_class.hpp"
#include "answerlearn/policy.hpp"
#include "answerlearn/rational.hpp"

namespace answerlearn {

// What an adaptive demonstrator sees before emitting y_t.
struct AdaptiveView {
  std::size_t t = 0;  // 0-based round
  ContextId x{};
  std::span<const ActionId> prediction;  // learner output this round
  std::span<const Demonstration> history;
  const ModelClass* cls = nullptr;
  std::size_t truth = 0;
};

using AdaptiveFn = std::function<ActionId(const AdaptiveView&)>;

struct DemonstratorSpec {
  enum class Kind { kDeterministicMin, kDeterministicMax, kUniformSupport, kTable, kAdaptive, kSuboptimal };

  Kind kind = Kind::kDeterministicMin;
  std::vector<std::vector<Rational>> table;  // |X| x |Y|, kTable and kSuboptimal
  AdaptiveFn adaptive;
  std::vector<Rational> losses;  // kSuboptimal: L(pi*, sigma) for every sigma
  std::string label;

  static DemonstratorSpec deterministic_min() { return {}; }
  static DemonstratorSpec deterministic_max();
  static DemonstratorSpec uniform_support();
  static DemonstratorSpec from_table(std::vector<std::vector<Rational>> table);
  static DemonstratorSpec adaptive_script(AdaptiveFn fn, std::string label);
};

const char* to_string(DemonstratorSpec::Kind kind);

struct ProblemInstance {
  std::shared_ptr<const ModelClass> cls;
  ContextDistribution distribution;
  std::size_t truth = 0;
  DemonstratorSpec demonstrator;
  std::string provenance;

  const ModelClass& model() const { return *cls; }
  SupportFunction truth_support() const { return cls->member(truth); }
  // The demonstrator as a policy; throws kAdaptiveNotSamplable for adaptive ones.
  Policy demonstrator_policy() const;
  std::uint64_t hash() const;
};

// Class validity, truth range, and demonstrator support on the truth.
ValidationResult validate_instance(const ProblemInstance& instance);

// Default cap on materialized product classes.
inline constexpr std::size_t kDefaultClassCap = std::size_t{1} << 20;

// Two hypotheses over two actions: {0} everywhere (truth) and {0,1}
// everywhere, on ceil(m / gamma) uniform contexts; labels always 0.
ProblemInstance mle_failure_supp(std::size_t m, const Rational& gamma);

// One context, s = ceil(1/gamma), 2s actions. Hypothesis 0 is {0, 1..s-1}
// (size s); hypothesis 1 is {0, s..2s-1} (size s+1) and is the truth; label 0.
ProblemInstance mle_failure_unif(const Rational& gamma);

// Two actions and q = floor((d-1)/2) uniform contexts. Hypotheses 2t and 2t+1
// are {0} at context t and {0,1} elsewhere; then a {0,1}-everywhere hypothesis
// when d-1 is odd; the last hypothesis is {1} everywhere and is the truth.
ProblemInstance majority_lb(std::size_t d);

// k+1 actions, floor(log_{k+1} d) contexts, every function from contexts to
// single actions. The truth is decided by the revealing adversary.
ProblemInstance passk_lb_online(std::size_t k, std::size_t d, std::size_t cap = kDefaultClassCap);

// 2k actions, q uniform contexts, every singleton-valued function.
ProblemInstance passk_lb_stat(std::size_t k, std::size_t q, std::size_t cap = kDefaultClassCap);

// Index of the singleton-valued function with the given per-context actions
// in the product classes above (mixed radix, context 0 most significant).
std::size_t product_index(std::span<const ActionId> actions, std::size_t num_actions);

// Two actions, 2m uniform contexts, one hypothesis {0,1} everywhere.
ProblemInstance cloning_impossible(std::size_t m);

struct RandomInstanceOptions {
  std::size_t num_contexts = 4;
  std::size_t num_actions = 4;
  std::size_t num_hypotheses = 8;
  Rational density{1, 2};
  bool random_distribution = false;
  DemonstratorSpec::Kind demonstrator = DemonstratorSpec::Kind::kDeterministicMin;
  Rational off_mass{1, 4};  // kSuboptimal only
  std::uint64_t seed = 0;
};

ProblemInstance random_instance(const RandomInstanceOptions& options);

// Demonstrator mixing (1 - off_mass) * Unif(truth(x)) with off_mass * Unif(Y),
// recording L(pi*, sigma) for every hypothesis.
DemonstratorSpec suboptimal_demonstrator(const ModelClass& cls, std::size_t truth,
                                         const ContextDistribution& d, const Rational& off_mass);

RewardClass random_reward_class(std::size_t num_contexts, std::size_t num_actions,
                                std::size_t members, std::uint64_t seed);

struct CloningRow {
  std::string estimator;
  Rational mean_tv;         // averaged over the demonstrator prior and datasets
  double mean_hellinger2 = 0.0;
  Rational loss;
};

// Exact averages over all 2^{2m} deterministic demonstrators and all m-sample
// datasets for constant estimators (Pr[0] = q for q in {0, 1/4, 1/2, 3/4, 1})
// and their memorizing variants (copy the label on seen contexts).
// Throws kInstanceTooLarge for m > 4.
std::vector<CloningRow> cloning_report(std::size_t m);

}  // namespace answerlearn

#endif  // ANSWERLEARN_INSTANCES_HPP_
