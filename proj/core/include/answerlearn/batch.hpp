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

#ifndef ANSWERLEARN_BATCH_HPP_
#define ANSWERLEARN_BATCH_HPP_

#include <cstddef>
#include <memory>
#include <vector>

#include "answerlearn/model_class.hpp"
#include "answerlearn/policy.hpp"
#include "answerlearn/weights.hpp"

namespace answerlearn {

// Uniform mixture over the per-round online predictors of one replay.
struct SnapshotMixture {
  std::shared_ptr<const ModelClass> cls;
  Hyperparams params;
  std::size_t k = 1;
  bool boost = false;                                         // list-learner weights
  std::vector<WeightSnapshot> snapshots;                      // before each update
  std::vector<std::vector<std::vector<ActionId>>> predictions;  // [t][x] -> k actions

  std::size_t m() const { return predictions.size(); }
  Policy as_policy() const;          // k == 1
  ListPolicy as_list_policy() const;
};

struct O2bOptions {
  WeightMode mode = WeightMode::kExact;
  bool keep_snapshots = true;
  // Re-runs every prediction in the other mode and counts disagreements.
  bool cross_check = false;
};

struct O2bStats {
  std::size_t mode_disagreements = 0;
  std::size_t degenerate = 0;
};

// Throws kInvalidArgument on empty data; propagates kInvalidHyperparams.
SnapshotMixture train_o2b(std::shared_ptr<const ModelClass> cls, const Dataset& data,
                          const Hyperparams& params, const O2bOptions& options = {},
                          O2bStats* stats = nullptr);
SnapshotMixture train_o2b_passk(std::shared_ptr<const ModelClass> cls, const Dataset& data,
                                std::size_t k, const O2bOptions& options = {},
                                O2bStats* stats = nullptr);

// (1/m) sum_t loss of the t-th snapshot predictor, recomputed from the
// snapshots rather than the stored prediction table. Requires snapshots.
Rational expected_loss_exact(const SnapshotMixture& mixture, const ContextDistribution& d,
                             const SupportFunction& truth);
Rational expected_passk_loss_exact(const SnapshotMixture& mixture, const ContextDistribution& d,
                                   const SupportFunction& truth);

}  // namespace answerlearn

#endif  // ANSWERLEARN_BATCH_HPP_
