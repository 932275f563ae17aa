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

#ifndef ANSWERLEARN_MLE_HPP_
#define ANSWERLEARN_MLE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "answerlearn/model_class.hpp"
#include "answerlearn/policy.hpp"
#include "answerlearn/rational.hpp"

namespace answerlearn {

struct MleReport {
  std::vector<std::size_t> consistent;
  std::vector<std::size_t> argmax_set;
  // prod_i |sigma(x_i)| per consistent hypothesis; smaller means more likely.
  std::vector<BigInt> support_products;
  bool non_realizable = false;
};

// Likelihood maximizers over the uniform-on-support policies of the class.
MleReport mle_unif(const ModelClass& cls, const Dataset& data);

// One maximizer over the policies supported on a single consistent
// hypothesis: the empirical label distribution on seen contexts, and on unseen
// contexts a deterministic action from a witness hypothesis. With a truth, the
// witness is the consistent hypothesis that can err on the most unseen
// contexts (highest index on ties) and the action is its largest member
// outside truth(x), else its largest member. Without one, the witness is the
// highest-index consistent hypothesis and the action its largest member.
// Throws kEmptyVersionSpace.
Policy mle_pis_adversarial(const ModelClass& cls, const Dataset& data,
                           const std::optional<SupportFunction>& truth = std::nullopt);

// Pr_x[some y in truth(x) has pi(y|x) > 0].
Rational overlap_probability(const Policy& policy, const ContextDistribution& d,
                             const SupportFunction& truth);

// Pr_x[sigma(x) and truth(x) are disjoint].
Rational disjoint_mass(const ModelClass& cls, std::size_t h, const ContextDistribution& d,
                       const SupportFunction& truth);

}  // namespace answerlearn

#endif  // ANSWERLEARN_MLE_HPP_
