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

#ifndef ANSWERLEARN_TESTS_GENERATORS_HPP_
#define ANSWERLEARN_TESTS_GENERATORS_HPP_

// Seeded generators for property tests. Each property runs a fixed number of
// cases from derive_seed(property seed, case), so failures name a reproducible
// case index.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "answerlearn/model_class.hpp"
#include "answerlearn/policy.hpp"
#include "answerlearn/rational.hpp"
#include "answerlearn/rng.hpp"

namespace answerlearn::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t range(std::size_t lo, std::size_t hi) { return lo + rng_.uniform_below(hi - lo + 1); }
  bool coin() { return rng_.uniform_below(2) == 1; }
  SplitMix64& rng() { return rng_; }

  ActionSet nonempty_set(std::size_t num_actions) {
    ActionSet s(num_actions);
    while (s.empty()) {
      for (std::size_t y = 0; y < num_actions; ++y) {
        if (coin()) s.insert(action(y));
      }
    }
    return s;
  }

  ModelClass model_class(std::size_t nx, std::size_t ny, std::size_t ns) {
    ModelClass cls(nx, ny);
    for (std::size_t h = 0; h < ns; ++h) {
      SupportFunction f;
      for (std::size_t x = 0; x < nx; ++x) f.per_context.push_back(nonempty_set(ny));
      cls.add_member(f);
    }
    return cls;
  }

  std::shared_ptr<const ModelClass> small_class() {
    return std::make_shared<ModelClass>(model_class(range(1, 4), range(1, 5), range(1, 12)));
  }

  // Probabilities with denominators up to 64 summing to 1.
  std::vector<Rational> simplex(std::size_t n) {
    std::vector<long> w(n);
    long total = 0;
    for (auto& v : w) {
      v = static_cast<long>(range(1, 8));
      total += v;
    }
    std::vector<Rational> p;
    for (long v : w) p.emplace_back(v, total);
    return p;
  }

  ContextDistribution distribution(std::size_t nx) { return ContextDistribution(simplex(nx)); }

  // Realizable stream for `truth` of the given length.
  Dataset realizable(const ModelClass& cls, std::size_t truth, std::size_t length) {
    Dataset d;
    for (std::size_t t = 0; t < length; ++t) {
      const ContextId x = context(range(0, cls.num_contexts() - 1));
      const auto members = cls.support(truth, x).to_vector();
      d.push_back({x, members[range(0, members.size() - 1)]});
    }
    return d;
  }

  // Arbitrary labels, not necessarily consistent with anything.
  Dataset arbitrary(const ModelClass& cls, std::size_t length) {
    Dataset d;
    for (std::size_t t = 0; t < length; ++t) {
      d.push_back({context(range(0, cls.num_contexts() - 1)), action(range(0, cls.num_actions() - 1))});
    }
    return d;
  }

  std::vector<ActionId> actions(std::size_t nx, std::size_t ny) {
    std::vector<ActionId> out;
    for (std::size_t x = 0; x < nx; ++x) out.push_back(action(range(0, ny - 1)));
    return out;
  }

  std::vector<std::vector<Rational>> table(std::size_t nx, std::size_t ny) {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t x = 0; x < nx; ++x) rows.push_back(simplex(ny));
    return rows;
  }

 private:
  SplitMix64 rng_;
};

// Runs `body(gen, case_index)` for `cases` independently seeded cases.
template <typename F>
void for_cases(std::uint64_t seed, std::size_t cases, F&& body) {
  for (std::size_t i = 0; i < cases; ++i) {
    Gen gen(derive_seed(seed, i));
    body(gen, i);
  }
}

}  // namespace answerlearn::testing

#endif  // ANSWERLEARN_TESTS_GENERATORS_HPP_
