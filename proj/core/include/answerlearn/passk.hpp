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

#ifndef ANSWERLEARN_PASSK_HPP_
#define ANSWERLEARN_PASSK_HPP_

#include <cstddef>
#include <vector>

#include "answerlearn/common.hpp"
#include "answerlearn/rational.hpp"
#include "answerlearn/weights.hpp"

namespace answerlearn {

struct KSelection {
  std::vector<ActionId> actions;
  std::vector<bool> covered;       // U_t as a hypothesis mask
  std::vector<Rational> marginals;  // weight newly covered at each step (when requested)
  bool degenerate = false;
};

// Greedy top-k: each step takes the unused action whose support set adds the
// most uncovered weight, smallest index on ties; zero marginals pad with the
// smallest unused actions. Requires 1 <= k <= |Y| and beta == 0.
KSelection predict_k(const WeightState& state, ContextId x, std::size_t k,
                     bool with_marginals = true);
KSelection predict_k(const WeightState& state, ContextId x, std::size_t k, WeightMode mode,
                     bool with_marginals);

// Kills hypotheses that exclude y, boosts those containing y outside U.
// Requires a boost-scheme state.
void update_k(WeightState& state, ContextId x, const KSelection& selection, ActionId y);

struct KeyInequality {
  Rational outside;      // w(U \ A_y)
  Rational inside;       // w(A_y \ U)
  bool holds = false;   // outside >= k * inside
};

KeyInequality key_inequality(const WeightState& state, ContextId x, const KSelection& selection,
                             ActionId y);

}  // namespace answerlearn

#endif  // ANSWERLEARN_PASSK_HPP_
