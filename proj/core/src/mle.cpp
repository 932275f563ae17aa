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

#include "answerlearn/mle.hpp"

#include <algorithm>

namespace answerlearn {

MleReport mle_unif(const ModelClass& cls, const Dataset& data) {
  MleReport report;
  report.consistent = consistent_set(cls, data);
  report.non_realizable = report.consistent.empty();
  report.support_products.reserve(report.consistent.size());
  for (std::size_t h : report.consistent) {
    BigInt product = 1;
    for (const auto& [x, y] : data) product *= cls.support(h, x).count();
    report.support_products.push_back(std::move(product));
  }
  if (report.non_realizable) return report;
  const BigInt& best = *std::min_element(report.support_products.begin(), report.support_products.end());
  for (std::size_t i = 0; i < report.consistent.size(); ++i) {
    if (report.support_products[i] == best) report.argmax_set.push_back(report.consistent[i]);
  }
  return report;
}

Policy mle_pis_adversarial(const ModelClass& cls, const Dataset& data, const std::optional<SupportFunction>& truth) {
  const auto cons = consistent_set(cls, data);
  if (cons.empty()) throw Error(ErrorCode::kEmptyVersionSpace, "no hypothesis is consistent with the data");
  if (truth && truth->num_contexts() != cls.num_contexts()) {
    throw Error(ErrorCode::kDimensionMismatch, "truth and class disagree on |X|");
  }
  const std::size_t nx = cls.num_contexts();
  const std::size_t ny = cls.num_actions();
  std::vector<std::vector<long>> counts(nx, std::vector<long>(ny, 0));
  std::vector<long> seen(nx, 0);
  for (const auto& [x, y] : data) {
    ++counts[index(x)][index(y)];
    ++seen[index(x)];
  }

  // Unseen-context action under hypothesis h: the largest member outside the
  // truth when one exists, else the largest member.
  auto unseen_action = [&](std::size_t h, std::size_t x) {
    const ActionSetView s = cls.support(h, context(x));
    if (truth) {
      ActionSet outside(s);
      outside -= (*truth)(context(x));
      if (auto y = outside.max()) return *y;
    }
    return *s.max();
  };

  // The empirical part is shared; the witness hypothesis fixes the rest. With a
  // truth, take the consistent hypothesis erring on the most unseen contexts
  // (highest index on ties); without one, the highest-index consistent one.
  std::size_t witness = cons.back();
  if (truth) {
    std::size_t best_errors = 0;
    bool first = true;
    for (std::size_t h : cons) {
      std::size_t errors = 0;
      for (std::size_t x = 0; x < nx; ++x) {
        if (seen[x] == 0 && !(*truth)(context(x)).contains(unseen_action(h, x))) ++errors;
      }
      if (first || errors >= best_errors) {
        best_errors = errors;
        witness = h;
        first = false;
      }
    }
  }

  std::vector<std::vector<Rational>> table(nx, std::vector<Rational>(ny, Rational(0)));
  for (std::size_t x = 0; x < nx; ++x) {
    if (seen[x] > 0) {
      for (std::size_t y = 0; y < ny; ++y) {
        if (counts[x][y] != 0) table[x][y] = Rational(counts[x][y], seen[x]);
      }
    } else {
      table[x][index(unseen_action(witness, x))] = 1;
    }
  }
  return table_policy(std::move(table));
}

Rational overlap_probability(const Policy& policy, const ContextDistribution& d, const SupportFunction& truth) {
  if (policy.num_contexts != d.size() || truth.num_contexts() != d.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "policy, distribution and truth disagree on |X|");
  }
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[context(x)] == 0) continue;
    const auto probs = action_probs(policy, context(x));
    bool overlap = false;
    truth(context(x)).view().for_each([&](ActionId y) { overlap = overlap || probs[index(y)] > 0; });
    if (overlap) total += d[context(x)];
  }
  return total;
}

Rational disjoint_mass(const ModelClass& cls, std::size_t h, const ContextDistribution& d,
                       const SupportFunction& truth) {
  if (cls.num_contexts() != d.size() || truth.num_contexts() != d.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "class, distribution and truth disagree on |X|");
  }
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (!cls.support(h, context(x)).intersects(truth(context(x)))) total += d[context(x)];
  }
  return total;
}

}  // namespace answerlearn
