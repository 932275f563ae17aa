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

#ifndef ANSWERLEARN_SIM_HPP_
#define ANSWERLEARN_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "answerlearn/instances.hpp"
#include "answerlearn/model_class.hpp"
#include "answerlearn/rng.hpp"
#include "answerlearn/weights.hpp"

namespace answerlearn {

// i.i.d. draws x ~ D, y ~ demonstrator(x). Throws kAdaptiveNotSamplable.
Dataset sample_dataset(const ProblemInstance& instance, std::size_t m, std::uint64_t seed);

// One label from a non-adaptive demonstrator.
ActionId demonstrate(const ProblemInstance& instance, ContextId x, SplitMix64& rng);

struct LearnerSpec {
  enum class Kind { kWeighted, kPassK, kMajority, kCommonIntersection };

  Kind kind = Kind::kWeighted;
  Hyperparams params = Hyperparams::realizable();
  std::size_t k = 1;
  WeightMode mode = WeightMode::kExact;
  bool require_monotone = false;

  static LearnerSpec weighted(const Hyperparams& params);
  static LearnerSpec passk(std::size_t k);
  static LearnerSpec majority();
  static LearnerSpec common_intersection();

  std::size_t list_size() const { return kind == Kind::kPassK ? k : 1; }
  std::string label() const;
};

// Worst-case mistake bound on realizable sequences, when one applies.
std::optional<std::uint64_t> mistake_bound(const LearnerSpec& spec, std::size_t class_size);

struct LearnerOutput {
  std::vector<ActionId> actions;
  bool degenerate = false;
  std::vector<Rational> marginals;  // list learner only
  std::vector<bool> covered;        // list learner only
};

// Sees only contexts and labels; the truth stays with the driver.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual LearnerOutput predict(ContextId x) = 0;
  virtual void observe(ContextId x, const LearnerOutput& output, ActionId y) = 0;
  virtual std::unique_ptr<OnlineLearner> clone() const = 0;
  // Weight state for learners that keep one.
  virtual const WeightState* weights() const { return nullptr; }
};

std::unique_ptr<OnlineLearner> make_learner(const LearnerSpec& spec,
                                            std::shared_ptr<const ModelClass> cls);

// Chooses contexts and labels online, possibly after seeing the prediction.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::size_t rounds() const = 0;
  virtual ContextId next_context(std::size_t t, std::span<const Demonstration> history) = 0;
  virtual ActionId reveal(std::size_t t, ContextId x, std::span<const ActionId> prediction,
                          std::span<const Demonstration> history) = 0;
  // A hypothesis consistent with the whole history; becomes the run's truth.
  virtual std::size_t resolve_truth(const ModelClass& cls,
                                    std::span<const Demonstration> history) = 0;
};

// On a product class of singleton-valued functions: shows context t at round t
// and reveals the smallest action outside the prediction.
class RevealingAdversary : public Adversary {
 public:
  explicit RevealingAdversary(std::size_t rounds) : rounds_(rounds) {}
  std::size_t rounds() const override { return rounds_; }
  ContextId next_context(std::size_t t, std::span<const Demonstration> history) override;
  ActionId reveal(std::size_t t, ContextId x, std::span<const ActionId> prediction,
                  std::span<const Demonstration> history) override;
  std::size_t resolve_truth(const ModelClass& cls, std::span<const Demonstration> history) override;

 private:
  std::size_t rounds_;
};

struct SampledSource {
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
};

// Fixed contexts; labels given explicitly or drawn from the demonstrator.
struct ScriptedSource {
  std::vector<ContextId> contexts;
  std::vector<ActionId> labels;
  std::uint64_t seed = 0;

  static ScriptedSource from_dataset(const Dataset& data);
};

struct AdversarialSource {
  std::shared_ptr<Adversary> adversary;
};

using SequenceSource = std::variant<SampledSource, ScriptedSource, AdversarialSource>;

struct RunOptions {
  bool record_total_weight = true;
  // Predict in the other weight mode each round and compare decisions.
  bool cross_check_modes = false;
  // Exact W_{t+1} <= W_t check on every round.
  bool check_monotone = false;
  bool check_key_inequality = false;
  bool record_marginals = true;
};

struct RoundRecord {
  std::size_t t = 0;
  ContextId x{};
  std::vector<ActionId> y_hat;
  ActionId y{};
  bool mistake = false;
  bool degenerate = false;
  std::string total_weight;  // W_t before the update, exact
  std::vector<std::string> marginals;
};

struct RunSummary {
  std::size_t rounds = 0;
  std::size_t mistakes = 0;
  std::optional<std::uint64_t> bound;
  bool realizable = true;
  bool within_bound = true;
  std::size_t mode_disagreements = 0;
  std::size_t monotone_failures = 0;
  std::size_t key_inequality_failures = 0;
  std::size_t degenerate_rounds = 0;
};

struct RunRecord {
  std::string learner;
  std::uint64_t instance_hash = 0;
  std::uint64_t seed = 0;
  std::size_t truth = 0;
  std::vector<RoundRecord> rounds;
  RunSummary summary;

  Dataset dataset() const;
};

// Runs the protocol: context, prediction, hidden mistake check, label, update.
// Throws kDemonstratorViolation when a label leaves the truth's support
// (suboptimal demonstrators excepted).
RunRecord run_online(const ProblemInstance& instance, const LearnerSpec& spec,
                     const SequenceSource& source, const RunOptions& options = {});

// Randomized greedy search over realizable sequences of length T for a run with
// many mistakes. Budget counts candidate label evaluations; budget 0 returns the
// baseline x_t = t mod |X|, y_t = min truth(x_t).
RunRecord adversarial_search(const ProblemInstance& instance, const LearnerSpec& spec,
                             std::size_t rounds, std::size_t budget, std::uint64_t seed,
                             const RunOptions& options = {});

}  // namespace answerlearn

#endif  // ANSWERLEARN_SIM_HPP_
