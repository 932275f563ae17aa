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

#ifndef ANSWERLEARN_SRC_DETAIL_TALLIES_HPP_
#define ANSWERLEARN_SRC_DETAIL_TALLIES_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "answerlearn/weights.hpp"

namespace answerlearn::detail {

// Common-denominator integer weights: w(h) = numerator(h) / denominator().
class ExactScale {
 public:
  explicit ExactScale(const WeightState& state);
  BigInt numerator(std::size_t h) const;
  BigInt denominator() const;

 private:
  static void fill_powers(const BigInt& base, std::uint32_t top, std::vector<BigInt>& out);
  static const BigInt& power(const std::vector<BigInt>& table, std::uint32_t e);

  const WeightState* state_;
  BigInt p1_, q1_, p2_, q2_;
  std::uint32_t max_e_ = 0;
  std::uint32_t max_b_ = 0;
  std::vector<BigInt> p1_pow_, q1_pow_, p2_pow_, q2_pow_;
};

// Per-action tallies of exp-shifted weights with a rigorous absolute error bound.
struct FloatTallies {
  std::vector<double> value;
  std::vector<double> error;
  bool any_positive = false;
};

// Hypotheses flagged in `excluded` are skipped.
FloatTallies float_tallies(const WeightState& state, ContextId x, const std::vector<bool>* excluded);

// Smallest index within relative 1e-9 of the largest tally.
std::size_t float_argmax(const FloatTallies& t);

// Allowed actions whose exact tally could still be the maximum.
std::vector<std::size_t> exact_candidates(const FloatTallies& t, const std::vector<bool>& allowed);

// Exact argmax among candidates, smallest index on ties.
std::size_t exact_argmax(const WeightState& state, const ExactScale& scale, ContextId x,
                         const std::vector<std::size_t>& candidates, const std::vector<bool>* excluded);

}  // namespace answerlearn::detail

#endif  // ANSWERLEARN_SRC_DETAIL_TALLIES_HPP_
