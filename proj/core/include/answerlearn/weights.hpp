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

#ifndef ANSWERLEARN_WEIGHTS_HPP_
#define ANSWERLEARN_WEIGHTS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "answerlearn/common.hpp"
#include "answerlearn/model_class.hpp"
#include "answerlearn/rational.hpp"

namespace answerlearn {

struct Hyperparams {
  Rational alpha{2};
  Rational beta{0};

  static Hyperparams realizable() { return {Rational(2), Rational(0)}; }
  static Hyperparams agnostic() { return {Rational(4, 3), Rational(2, 3)}; }
  static Hyperparams majority() { return {Rational(1), Rational(0)}; }

  // alpha <= 2 - beta and alpha * beta <= 1: total weight never increases.
  bool monotone() const { return alpha <= 2 - beta && alpha * beta <= 1; }

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

enum class WeightMode { kExact, kLogFloat };

// kAlphaBeta: w = alpha^a * beta^b.
// kBoost: w = (k+1)^c while alive, 0 after any contradicting label.
enum class WeightScheme { kAlphaBeta, kBoost };

struct Counters {
  std::uint32_t a = 0;  // rounds with y_hat outside sigma(x)
  std::uint32_t b = 0;  // rounds with y outside sigma(x)
  std::uint32_t c = 0;  // boost rounds (list learner)
  bool alive = true;

  friend bool operator==(const Counters&, const Counters&) = default;
};

class WeightState {
 public:
  // Throws kInvalidHyperparams for negative parameters, or when
  // require_monotone is set and params.monotone() fails.
  static WeightState create(std::shared_ptr<const ModelClass> cls, Hyperparams params,
                            WeightMode mode = WeightMode::kExact, bool require_monotone = false);
  // List-learner state: weights (k+1)^c on alive hypotheses.
  static WeightState create_boost(std::shared_ptr<const ModelClass> cls, std::size_t k,
                                  WeightMode mode = WeightMode::kExact);

  const ModelClass& model() const { return *cls_; }
  const std::shared_ptr<const ModelClass>& model_ptr() const { return cls_; }
  std::size_t size() const { return counters_.size(); }
  const Hyperparams& params() const { return params_; }
  WeightScheme scheme() const { return scheme_; }
  std::size_t k() const { return k_; }
  WeightMode mode() const { return mode_; }
  void set_mode(WeightMode mode) { mode_ = mode; }
  std::size_t round() const { return round_; }

  const Counters& counters(std::size_t h) const { return counters_[h]; }
  const std::vector<Counters>& all_counters() const { return counters_; }

  // Effective base and exponent: weight = base^exponent * beta^b (alpha-beta),
  // or base^c on alive hypotheses (boost).
  const Rational& base() const { return base_; }
  std::uint32_t exponent(std::size_t h) const {
    return scheme_ == WeightScheme::kBoost ? counters_[h].c : counters_[h].a;
  }
  // False iff the weight is exactly zero.
  bool positive(std::size_t h) const;

  Rational weight(std::size_t h) const;
  // ln w(h); -infinity when the weight is zero.
  double log_weight(std::size_t h) const;

  // Mutators used by the update rules.
  Counters& mutable_counters(std::size_t h) { return counters_[h]; }
  void advance_round() { ++round_; }
  void set_round(std::size_t round) { round_ = round; }

 private:
  WeightState() = default;

  std::shared_ptr<const ModelClass> cls_;
  Hyperparams params_;
  WeightScheme scheme_ = WeightScheme::kAlphaBeta;
  std::size_t k_ = 1;
  Rational base_;
  double log_base_ = 0.0;  // cached ln(base), ln(beta)
  double log_beta_ = 0.0;
  bool base_zero_ = false;
  bool beta_zero_ = false;
  WeightMode mode_ = WeightMode::kExact;
  std::size_t round_ = 1;
  std::vector<Counters> counters_;
};

// Integer weights over a shared positive denominator: w(h) = numerators[h] / denominator.
struct ScaledWeights {
  std::vector<BigInt> numerators;
  BigInt denominator;
};
ScaledWeights scaled_weights(const WeightState& state);

struct Prediction {
  ActionId action{};
  bool degenerate = false;  // every weight was zero
};

Prediction predict(const WeightState& state, ContextId x);
Prediction predict(const WeightState& state, ContextId x, WeightMode mode);

// Per-action tallies sum_{h: y in sigma_h(x)} w(h), exact.
std::vector<Rational> exact_tallies(const WeightState& state, ContextId x);

void update(WeightState& state, ContextId x, ActionId y_hat, ActionId y);

Rational total_weight(const WeightState& state);
double log_total_weight(const WeightState& state);

struct WeightSnapshot {
  std::size_t round = 0;
  std::vector<Counters> counters;
};

WeightSnapshot snapshot(const WeightState& state);
// State sharing class and parameters with `like`, holding the snapshot's counters.
WeightState restore(const WeightState& like, const WeightSnapshot& snap);

ActionId majority_predict(const ModelClass& cls, const Dataset& data, ContextId x);
ActionId majority_predict(const ModelClass& cls, const VersionSpace& space, ContextId x);

struct CiPrediction {
  ActionId action{};
  bool in_intersection = false;
  bool non_realizable = false;
};

CiPrediction common_intersection_predict(const ModelClass& cls, const Dataset& data, ContextId x);
CiPrediction common_intersection_predict(const ModelClass& cls, const VersionSpace& space,
                                         ContextId x);

struct MistakeLedger {
  std::vector<std::uint64_t> alg_mistakes;  // M_alg(h) = a_h
  std::vector<std::uint64_t> mistakes;      // M(h) = b_h
  std::vector<bool> vs_truth;               // per round, when a truth is declared

  static MistakeLedger from_state(const WeightState& state);
};

struct RegretEntry {
  std::size_t hypothesis = 0;
  std::uint64_t alg_mistakes = 0;
  std::uint64_t mistakes = 0;
  double bound = 0.0;
  double slack = 0.0;  // bound - alg_mistakes
};

struct RegretReport {
  std::vector<RegretEntry> entries;
  double worst_slack = 0.0;
};

// Checks alpha^{M_alg} * beta^{M} <= |S| exactly for every hypothesis, which is
// M_alg <= ln|S|/ln(alpha) + M ln(1/beta)/ln(alpha). Requires alpha > 1 and
// 0 < beta < 1. Throws kBoundViolated naming the first failing hypothesis.
RegretReport regret_check(const MistakeLedger& ledger, const Hyperparams& params);

// Largest M with alpha^M <= |S| when beta = 0 and alpha > 1; |S| - 1 when
// alpha = 1 and beta = 0; nullopt otherwise.
std::optional<std::uint64_t> realizable_mistake_bound(const Hyperparams& params,
                                                      std::size_t class_size);

}  // namespace answerlearn

#endif  // ANSWERLEARN_WEIGHTS_HPP_
