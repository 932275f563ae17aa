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

#ifndef ANSWERLEARN_RNG_HPP_
#define ANSWERLEARN_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "answerlearn/rational.hpp"

namespace answerlearn {

// SplitMix64 in counter form: the i-th output (0-based) is
// mix(seed + (i + 1) * 0x9e3779b97f4a7c15). Reference vectors for seed 0:
//   0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGamma;
    return mix(state_);
  }

  // Output at counter position i without advancing.
  static result_type at(std::uint64_t seed, std::uint64_t i) { return mix(seed + (i + 1) * kGamma); }

  // Uniform on [0, bound) by rejection; bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  BigInt uniform_below(const BigInt& bound);

  // Exact Bernoulli(p) for rational p in [0, 1].
  bool bernoulli(const Rational& p);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Per-trial seed stream: hash(master, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Exact inverse-CDF sampler over a finite rational probability vector.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  // probs must be non-negative and sum to exactly 1.
  explicit DiscreteSampler(std::span<const Rational> probs);

  std::size_t sample(SplitMix64& rng) const;
  std::size_t size() const { return size_; }

 private:
  std::size_t size_ = 0;
  bool small_ = true;
  std::uint64_t small_total_ = 0;
  std::vector<std::uint64_t> small_cumulative_;
  BigInt total_;
  std::vector<BigInt> cumulative_;
};

}  // namespace answerlearn

#endif  // ANSWERLEARN_RNG_HPP_
