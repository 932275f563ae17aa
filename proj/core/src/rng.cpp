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

#include "answerlearn/rng.hpp"

#include <algorithm>
#include <limits>

#include "answerlearn/common.hpp"

namespace answerlearn {

std::uint64_t SplitMix64::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform_below(0)");
  // Reject the low (2^64 mod bound) outputs so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = (*this)();
    if (r >= threshold) return r % bound;
  }
}

BigInt SplitMix64::uniform_below(const BigInt& bound) {
  if (bound <= 0) throw Error(ErrorCode::kInvalidArgument, "uniform_below of non-positive bound");
  if (bound <= std::numeric_limits<std::uint64_t>::max()) {
    return BigInt(uniform_below(bound.convert_to<std::uint64_t>()));
  }
  const std::size_t bits = boost::multiprecision::msb(BigInt(bound - 1)) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t top_bits = bits - (words - 1) * 64;
  const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
  for (;;) {
    BigInt r = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = (*this)();
      if (w == 0) word &= top_mask;
      r <<= 64;
      r += word;
    }
    if (r < bound) return r;
  }
}

bool SplitMix64::bernoulli(const Rational& p) {
  if (p < 0 || p > 1) throw Error(ErrorCode::kInvalidArgument, "bernoulli parameter outside [0,1]");
  const BigInt& n = boost::multiprecision::numerator(p);
  const BigInt& d = boost::multiprecision::denominator(p);
  if (d <= std::numeric_limits<std::uint64_t>::max()) {
    return uniform_below(d.convert_to<std::uint64_t>()) < n.convert_to<std::uint64_t>();
  }
  return uniform_below(d) < n;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return SplitMix64::mix(master + SplitMix64::mix(stream + SplitMix64::kGamma));
}

DiscreteSampler::DiscreteSampler(std::span<const Rational> probs) : size_(probs.size()) {
  if (probs.empty()) throw Error(ErrorCode::kInvalidArgument, "empty distribution");
  BigInt lcm = 1;
  for (const auto& p : probs) {
    if (p < 0) throw Error(ErrorCode::kInvalidArgument, "negative probability");
    lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(p));
  }
  BigInt running = 0;
  cumulative_.reserve(probs.size());
  for (const auto& p : probs) {
    running += boost::multiprecision::numerator(p) * (lcm / boost::multiprecision::denominator(p));
    cumulative_.push_back(running);
  }
  if (running != lcm) throw Error(ErrorCode::kInvalidArgument, "probabilities do not sum to 1");
  total_ = lcm;
  small_ = total_ <= std::numeric_limits<std::uint64_t>::max();
  if (small_) {
    small_total_ = total_.convert_to<std::uint64_t>();
    small_cumulative_.reserve(cumulative_.size());
    for (const auto& c : cumulative_) small_cumulative_.push_back(c.convert_to<std::uint64_t>());
  }
}

std::size_t DiscreteSampler::sample(SplitMix64& rng) const {
  if (size_ == 0) throw Error(ErrorCode::kInvalidArgument, "sampling from an empty distribution");
  if (small_) {
    const std::uint64_t u = rng.uniform_below(small_total_);
    return static_cast<std::size_t>(
        std::upper_bound(small_cumulative_.begin(), small_cumulative_.end(), u) - small_cumulative_.begin());
  }
  const BigInt u = rng.uniform_below(total_);
  return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
}

}  // namespace answerlearn
