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

#include <gtest/gtest.h>

#include "answerlearn/instances.hpp"
#include "answerlearn/policy.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace answerlearn {
namespace {

using testing::for_cases;
using testing::Gen;

std::vector<std::vector<Rational>> probs_of(const Policy& p) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t x = 0; x < p.num_contexts; ++x) out.push_back(action_probs(p, context(x)));
  return out;
}

TEST(ContextDistribution, RejectsMassesThatDoNotSumToOne) {
  EXPECT_THROW(ContextDistribution({Rational(1, 2), Rational(1, 3)}), Error);
  EXPECT_THROW(ContextDistribution({Rational(3, 2), Rational(-1, 2)}), Error);
  EXPECT_NO_THROW(ContextDistribution({Rational(1, 2), Rational(1, 2)}));
  EXPECT_TRUE(ContextDistribution::uniform(5).is_uniform());
  EXPECT_EQ(ContextDistribution::point_mass(3, context(1))[context(1)], Rational(1));
}

TEST(Policy, UniformOnWrongSupportLosesOneMinusOneOverS) {
  const ProblemInstance inst = mle_failure_unif(Rational(1, 2));
  const Policy p = uniform_support_policy(inst.model().member(0), inst.model().num_actions());
  EXPECT_EQ(loss_exact(p, inst.distribution, inst.truth_support()), Rational(1, 2));
}

TEST(Policy, LossMatchesCellEnumerationForTables) {
  for_cases(101, 200, [](Gen& g, std::size_t) {
    const std::size_t nx = g.range(1, 4), ny = g.range(1, 5);
    const ModelClass cls = g.model_class(nx, ny, 1);
    const ContextDistribution d = g.distribution(nx);
    const auto table = g.table(nx, ny);
    const Policy p = table_policy(table);
    EXPECT_EQ(loss_exact(p, d, cls.member(0)), testing::oracle_loss(table, d, cls.member(0)));
  });
}

TEST(Policy, EveryKindAgreesWithItsProbabilityTable) {
  for_cases(102, 200, [](Gen& g, std::size_t) {
    const std::size_t nx = g.range(1, 4), ny = g.range(1, 5);
    const ModelClass cls = g.model_class(nx, ny, 2);
    const ContextDistribution d = g.distribution(nx);
    std::vector<Policy> policies = {deterministic_policy(ny, g.actions(nx, ny)),
                                    uniform_support_policy(cls.member(1), ny)};
    std::vector<std::vector<ActionId>> rows;
    for (std::size_t t = 0; t < g.range(1, 5); ++t) rows.push_back(g.actions(nx, ny));
    policies.push_back(mixture_policy(ny, rows));
    for (const Policy& p : policies) {
      const auto probs = probs_of(p);
      for (const auto& row : probs) {
        Rational total = 0;
        for (const auto& v : row) total += v;
        EXPECT_EQ(total, 1);
      }
      EXPECT_EQ(loss_exact(p, d, cls.member(0)), testing::oracle_loss(probs, d, cls.member(0)));
    }
  });
}

TEST(Policy, MixtureLossIsTheAverageOfItsMembers) {
  for_cases(103, 100, [](Gen& g, std::size_t) {
    const std::size_t nx = g.range(1, 4), ny = g.range(2, 5);
    const ModelClass cls = g.model_class(nx, ny, 1);
    const ContextDistribution d = g.distribution(nx);
    std::vector<std::vector<ActionId>> rows;
    Rational sum = 0;
    const std::size_t m = g.range(1, 6);
    for (std::size_t t = 0; t < m; ++t) {
      rows.push_back(g.actions(nx, ny));
      sum += loss_exact(deterministic_policy(ny, rows.back()), d, cls.member(0));
    }
    EXPECT_EQ(loss_exact(mixture_policy(ny, rows), d, cls.member(0)), sum / static_cast<long>(m));
  });
}

TEST(Policy, SamplerPoliciesAreNotExact) {
  Policy p;
  p.num_contexts = 1;
  p.num_actions = 2;
  p.kind = SamplerPolicy{[](ContextId, SplitMix64&) { return action(0); }, "const"};
  EXPECT_FALSE(p.is_exact());
  try {
    action_probs(p, context(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInexactPolicy);
  }
}

TEST(Policy, ValueMatchesDirectSum) {
  for_cases(104, 100, [](Gen& g, std::size_t) {
    const std::size_t nx = g.range(1, 4), ny = g.range(1, 4);
    std::vector<std::vector<Rational>> rows;
    for (std::size_t x = 0; x < nx; ++x) {
      std::vector<Rational> row;
      for (std::size_t y = 0; y < ny; ++y) row.emplace_back(static_cast<long>(g.range(0, 8)), 8);
      rows.push_back(row);
    }
    const RewardFunction r(rows);
    const ContextDistribution d = g.distribution(nx);
    const auto table = g.table(nx, ny);
    Rational expect = 0, best = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      Rational mx = 0;
      for (std::size_t y = 0; y < ny; ++y) {
        expect += d[context(x)] * table[x][y] * rows[x][y];
        mx = std::max(mx, rows[x][y]);
      }
      best += d[context(x)] * mx;
    }
    EXPECT_EQ(value_exact(table_policy(table), d, r), expect);
    EXPECT_EQ(optimal_value(d, r), best);
    EXPECT_LE(value_exact(table_policy(table), d, r), optimal_value(d, r));
  });
}

TEST(ListPolicy, PassKLossMatchesTupleEnumeration) {
  for_cases(105, 100, [](Gen& g, std::size_t) {
    const std::size_t nx = g.range(1, 3), ny = g.range(2, 5), k = 2;
    const ModelClass cls = g.model_class(nx, ny, 1);
    const ContextDistribution d = g.distribution(nx);
    ListPolicy mu{nx, ny, k, DeterministicKPolicy{}};
    auto& lists = std::get<DeterministicKPolicy>(mu.kind).lists;
    Rational expect = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t a = g.range(0, ny - 1);
      std::size_t b = g.range(0, ny - 2);
      if (b >= a) ++b;
      lists.push_back({action(a), action(b)});
      const auto& s = cls.support(0, context(x));
      if (!s.contains(action(a)) && !s.contains(action(b))) expect += d[context(x)];
    }
    EXPECT_EQ(passk_loss_exact(mu, d, cls.member(0)), expect);
  });
}

TEST(ListPolicy, TupleDistributionMergesEqualTuples) {
  ListPolicy mu{1, 3, 2, MixtureKPolicy{}};
  auto& preds = std::get<MixtureKPolicy>(mu.kind).predictions;
  preds = {{{action(0), action(1)}}, {{action(0), action(1)}}, {{action(2), action(1)}}};
  const auto dist = tuple_distribution(mu, context(0));
  ASSERT_EQ(dist.size(), 2u);
  Rational total = 0;
  for (const auto& [tuple, p] : dist) {
    total += p;
    if (tuple == std::vector<ActionId>{action(0), action(1)}) EXPECT_EQ(p, Rational(2, 3));
  }
  EXPECT_EQ(total, 1);
}

TEST(ListPolicy, InducedPolicyNeedsListSizeOne) {
  ListPolicy mu{1, 3, 2, DeterministicKPolicy{{{action(0), action(1)}}}};
  EXPECT_THROW(induced_policy(mu), Error);
  ListPolicy one{1, 3, 1, DeterministicKPolicy{{{action(2)}}}};
  EXPECT_EQ(action_probs(induced_policy(one), context(0))[2], Rational(1));
}

TEST(ClopperPearson, ZeroFailuresUpperBoundIsBelowThreePointSevenOverN) {
  for (std::uint64_t n : {10u, 100u, 1000u, 100000u}) {
    const auto [lo, hi] = clopper_pearson(0, n);
    EXPECT_EQ(lo, 0.0);
    EXPECT_LT(hi, 3.7 / static_cast<double>(n));
  }
  const auto [lo, hi] = clopper_pearson(50, 100);
  EXPECT_NEAR(lo + hi, 1.0, 1e-12);
}

TEST(LossMonteCarlo, ConvergesToTheExactLoss) {
  for_cases(106, 5, [](Gen& g, std::size_t i) {
    const std::size_t nx = g.range(2, 4), ny = g.range(2, 4);
    const ModelClass cls = g.model_class(nx, ny, 1);
    const ContextDistribution d = g.distribution(nx);
    const Policy p = table_policy(g.table(nx, ny));
    const McEstimate est = loss_mc(p, d, cls.member(0), 100000, i);
    const double exact = to_double(loss_exact(p, d, cls.member(0)));
    EXPECT_NEAR(est.estimate, exact, 0.01);
    EXPECT_LE(est.ci_low, est.estimate);
    EXPECT_GE(est.ci_high, est.estimate);
  });
}

TEST(LossMonteCarlo, ZeroLossPolicyEstimatesZero) {
  Gen g(5);
  const ModelClass cls = g.model_class(3, 3, 1);
  const Policy p = uniform_support_policy(cls.member(0), 3);
  const McEstimate est = loss_mc(p, ContextDistribution::uniform(3), cls.member(0), 5000, 1);
  EXPECT_EQ(est.failures, 0u);
  EXPECT_LT(est.ci_high, 3.7 / 5000);
}

}  // namespace
}  // namespace answerlearn
