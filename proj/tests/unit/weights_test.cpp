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

#include <cmath>

#include "answerlearn/instances.hpp"
#include "answerlearn/weights.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace answerlearn {
namespace {

using testing::for_cases;
using testing::Gen;

// Rational (alpha, beta) pairs covering every regime the learner supports.
Hyperparams random_params(Gen& g) {
  static const Hyperparams kPool[] = {
      Hyperparams::realizable(), Hyperparams::agnostic(), Hyperparams::majority(),
      {Rational(3, 2), Rational(1, 2)}, {Rational(5, 4), Rational(0)}, {Rational(3), Rational(1, 3)},
      {Rational(1), Rational(1, 2)}, {Rational(0), Rational(1)},
  };
  return kPool[g.range(0, std::size(kPool) - 1)];
}

// Plays `data` through the learner's own predictions.
WeightState play(std::shared_ptr<const ModelClass> cls, const Hyperparams& params, const Dataset& data) {
  WeightState s = WeightState::create(std::move(cls), params);
  for (const auto& z : data) update(s, z.x, predict(s, z.x).action, z.y);
  return s;
}

TEST(WeightState, CreateValidatesHyperparameters) {
  auto cls = std::make_shared<ModelClass>(Gen(1).model_class(2, 2, 2));
  EXPECT_THROW(WeightState::create(cls, {Rational(-1), Rational(0)}), Error);
  EXPECT_THROW(WeightState::create(cls, {Rational(3), Rational(0)}, WeightMode::kExact, true), Error);
  EXPECT_NO_THROW(WeightState::create(cls, Hyperparams::agnostic(), WeightMode::kExact, true));
  EXPECT_THROW(WeightState::create_boost(cls, 0), Error);
}

TEST(Hyperparams, MonotoneRegion) {
  EXPECT_TRUE(Hyperparams::realizable().monotone());
  EXPECT_TRUE(Hyperparams::agnostic().monotone());
  EXPECT_TRUE(Hyperparams::majority().monotone());
  EXPECT_FALSE((Hyperparams{Rational(3), Rational(0)}.monotone()));
  EXPECT_FALSE((Hyperparams{Rational(3, 2), Rational(4, 5)}.monotone()));
}

TEST(WeightState, WeightsTalliesAndTotalsMatchRawCounters) {
  for_cases(201, 300, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const WeightState s = play(cls, random_params(g), g.arbitrary(*cls, g.range(0, 12)));
    Rational total = 0;
    const ScaledWeights sw = scaled_weights(s);
    for (std::size_t h = 0; h < s.size(); ++h) {
      const Rational w = testing::oracle_weight(s, h);
      EXPECT_EQ(s.weight(h), w);
      EXPECT_EQ(s.positive(h), w > 0);
      EXPECT_EQ(Rational(sw.numerators[h], sw.denominator), w);
      total += w;
    }
    EXPECT_EQ(total_weight(s), total);
    if (total > 0) EXPECT_NEAR(log_total_weight(s), std::log(to_double(total)), 1e-9);
    for (std::size_t x = 0; x < cls->num_contexts(); ++x) {
      EXPECT_EQ(exact_tallies(s, context(x)), testing::oracle_tallies(s, context(x)));
    }
  });
}

TEST(Predict, ExactModeIsTheFirstArgmaxOfExactTallies) {
  for_cases(202, 400, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const WeightState s = play(cls, random_params(g), g.arbitrary(*cls, g.range(0, 15)));
    for (std::size_t x = 0; x < cls->num_contexts(); ++x) {
      const auto t = testing::oracle_tallies(s, context(x));
      const Prediction p = predict(s, context(x));
      bool all_zero = true;
      for (const auto& v : t) all_zero = all_zero && v == 0;
      EXPECT_EQ(p.degenerate, all_zero);
      EXPECT_EQ(index(p.action), all_zero ? 0u : testing::first_argmax(t));
    }
  });
}

TEST(Predict, ResolvesTiesFinerThanDoublePrecision) {
  // Tallies 2^60 against 2^60 + 1: the float filter cannot separate them.
  ModelClass cls(1, 2);
  auto add = [&](std::initializer_list<std::size_t> ys) {
    SupportFunction f;
    f.per_context = {ActionSet(2, ys)};
    cls.add_member(f);
  };
  add({0});
  add({1});
  add({1});
  add({1});
  auto ptr = std::make_shared<const ModelClass>(cls);
  WeightState s = WeightState::create(ptr, Hyperparams::realizable());
  s.mutable_counters(0).a = 60;
  s.mutable_counters(1).a = 59;
  s.mutable_counters(2).a = 59;
  EXPECT_EQ(index(predict(s, context(0)).action), 1u);
  // Exactly tied: smallest index wins.
  s.mutable_counters(3).alive = false;
  s.mutable_counters(3).b = 1;
  EXPECT_EQ(index(predict(s, context(0)).action), 0u);
}

TEST(Predict, AllZeroWeightsAreDegenerate) {
  auto cls = std::make_shared<const ModelClass>(Gen(3).model_class(2, 3, 3));
  WeightState s = WeightState::create(cls, Hyperparams::realizable());
  for (std::size_t h = 0; h < s.size(); ++h) {
    s.mutable_counters(h).b = 1;
    s.mutable_counters(h).alive = false;
  }
  const Prediction p = predict(s, context(1));
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(index(p.action), 0u);
}

TEST(Predict, LogFloatModeAgreesWithExactOnRandomStates) {
  for_cases(203, 300, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const WeightState s = play(cls, random_params(g), g.arbitrary(*cls, g.range(0, 30)));
    for (std::size_t x = 0; x < cls->num_contexts(); ++x) {
      EXPECT_EQ(predict(s, context(x), WeightMode::kExact).action,
                predict(s, context(x), WeightMode::kLogFloat).action);
    }
  });
}

TEST(Update, CountersFollowTheRule) {
  for_cases(204, 200, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const Hyperparams params = random_params(g);
    WeightState s = play(cls, params, g.arbitrary(*cls, g.range(0, 5)));
    const WeightState before = s;
    const ContextId x = context(g.range(0, cls->num_contexts() - 1));
    const ActionId y_hat = action(g.range(0, cls->num_actions() - 1));
    const ActionId y = action(g.range(0, cls->num_actions() - 1));
    update(s, x, y_hat, y);
    EXPECT_EQ(s.round(), before.round() + 1);
    for (std::size_t h = 0; h < s.size(); ++h) {
      const Counters& b = before.counters(h);
      const Counters& a = s.counters(h);
      EXPECT_EQ(a.a, b.a + (cls->contains(h, x, y_hat) ? 0u : 1u));
      EXPECT_EQ(a.b, b.b + (cls->contains(h, x, y) ? 0u : 1u));
      EXPECT_EQ(s.weight(h), before.weight(h) * (cls->contains(h, x, y_hat) ? Rational(1) : params.alpha) *
                                 (cls->contains(h, x, y) ? Rational(1) : params.beta));
    }
  });
}

TEST(Update, MonotoneParametersNeverIncreaseTotalWeight) {
  const Hyperparams pool[] = {Hyperparams::realizable(), Hyperparams::agnostic(), Hyperparams::majority(),
                              {Rational(3, 2), Rational(1, 2)}, {Rational(5, 4), Rational(3, 4)}};
  for_cases(205, 200, [&](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const Hyperparams params = pool[g.range(0, 4)];
    ASSERT_TRUE(params.monotone());
    WeightState s = WeightState::create(cls, params);
    Rational w = total_weight(s);
    for (const auto& z : g.arbitrary(*cls, 20)) {
      update(s, z.x, predict(s, z.x).action, z.y);
      const Rational next = total_weight(s);
      EXPECT_LE(next, w);
      w = next;
    }
  });
}

TEST(Snapshot, RestoreReproducesState) {
  for_cases(206, 50, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const WeightState s = play(cls, Hyperparams::agnostic(), g.arbitrary(*cls, 8));
    const WeightSnapshot snap = snapshot(s);
    const WeightState fresh = WeightState::create(cls, Hyperparams::agnostic());
    const WeightState r = restore(fresh, snap);
    EXPECT_EQ(r.all_counters(), s.all_counters());
    EXPECT_EQ(r.round(), s.round());
  });
}

TEST(MistakeBound, RealizableValues) {
  EXPECT_EQ(realizable_mistake_bound(Hyperparams::realizable(), 1024), 10u);
  EXPECT_EQ(realizable_mistake_bound(Hyperparams::realizable(), 1023), 9u);
  EXPECT_EQ(realizable_mistake_bound(Hyperparams::realizable(), 1), 0u);
  EXPECT_EQ(realizable_mistake_bound(Hyperparams::majority(), 7), 6u);
  EXPECT_EQ(realizable_mistake_bound({Rational(3), Rational(0)}, 9), 2u);
  EXPECT_FALSE(realizable_mistake_bound(Hyperparams::agnostic(), 9).has_value());
}

TEST(MistakeBound, HalvingWeightsStayWithinLogOfClassSize) {
  for_cases(207, 300, [](Gen& g, std::size_t) {
    auto cls = std::make_shared<const ModelClass>(g.model_class(g.range(1, 5), g.range(2, 5), g.range(1, 40)));
    const std::size_t truth = g.range(0, cls->size() - 1);
    WeightState s = WeightState::create(cls, Hyperparams::realizable());
    std::uint64_t mistakes = 0;
    for (const auto& z : g.realizable(*cls, truth, 40)) {
      const ActionId y_hat = predict(s, z.x).action;
      if (!cls->contains(truth, z.x, y_hat)) ++mistakes;
      update(s, z.x, y_hat, z.y);
    }
    EXPECT_LE(mistakes, *realizable_mistake_bound(Hyperparams::realizable(), cls->size()));
  });
}

TEST(Majority, MatchesVoteCountsOverTheConsistentSet) {
  for_cases(208, 300, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const std::size_t truth = g.range(0, cls->size() - 1);
    const Dataset data = g.realizable(*cls, truth, g.range(0, 6));
    const auto cons = testing::oracle_consistent(*cls, data);
    VersionSpace vs(*cls);
    for (const auto& z : data) vs.observe(z.x, z.y);
    for (std::size_t x = 0; x < cls->num_contexts(); ++x) {
      std::vector<Rational> votes(cls->num_actions(), Rational(0));
      for (std::size_t h : cons) {
        for (std::size_t y = 0; y < votes.size(); ++y) votes[y] += cls->contains(h, context(x), action(y)) ? 1 : 0;
      }
      const std::size_t expect = testing::first_argmax(votes);
      EXPECT_EQ(index(majority_predict(*cls, data, context(x))), expect);
      EXPECT_EQ(index(majority_predict(*cls, vs, context(x))), expect);
    }
  });
}

TEST(Majority, PlantedCoordinateVotesZero) {
  const ProblemInstance inst = majority_lb(9);
  for (std::size_t t = 0; t < inst.model().num_contexts(); ++t) {
    Dataset data;
    for (std::size_t x = 0; x < inst.model().num_contexts(); ++x) {
      if (x != t) data.push_back({context(x), action(1)});
    }
    EXPECT_EQ(index(majority_predict(inst.model(), data, context(t))), 0u);
    const CiPrediction ci = common_intersection_predict(inst.model(), data, context(t));
    EXPECT_FALSE(ci.in_intersection);
  }
}

TEST(CommonIntersection, SmallestCommonMemberOrProperFallback) {
  for_cases(209, 300, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const Dataset data = g.arbitrary(*cls, g.range(0, 4));
    const auto cons = testing::oracle_consistent(*cls, data);
    for (std::size_t x = 0; x < cls->num_contexts(); ++x) {
      const CiPrediction p = common_intersection_predict(*cls, data, context(x));
      if (cons.empty()) {
        EXPECT_TRUE(p.non_realizable);
        EXPECT_EQ(index(p.action), 0u);
        continue;
      }
      std::optional<std::size_t> common;
      for (std::size_t y = 0; y < cls->num_actions() && !common; ++y) {
        bool all = true;
        for (std::size_t h : cons) all = all && cls->contains(h, context(x), action(y));
        if (all) common = y;
      }
      EXPECT_EQ(p.in_intersection, common.has_value());
      const std::size_t expect = common ? *common : index(*cls->support(cons.front(), context(x)).min());
      EXPECT_EQ(index(p.action), expect);
    }
  });
}

TEST(CommonIntersection, SingletonClassAlwaysInIntersection) {
  Gen g(4);
  const ModelClass cls = g.model_class(3, 4, 1);
  for (std::size_t x = 0; x < 3; ++x) {
    const CiPrediction p = common_intersection_predict(cls, Dataset{}, context(x));
    EXPECT_TRUE(p.in_intersection);
    EXPECT_EQ(p.action, *cls.support(0, context(x)).min());
  }
}

TEST(Regret, HoldsOnArbitraryStreams) {
  for_cases(210, 200, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const WeightState s = play(cls, Hyperparams::agnostic(), g.arbitrary(*cls, g.range(1, 60)));
    const RegretReport r = regret_check(MistakeLedger::from_state(s), Hyperparams::agnostic());
    EXPECT_EQ(r.entries.size(), cls->size());
    EXPECT_GE(r.worst_slack, -1e-9);
  });
}

TEST(Regret, FlagsAViolatingLedger) {
  MistakeLedger ledger;
  ledger.alg_mistakes = {0, 50};
  ledger.mistakes = {0, 0};
  try {
    regret_check(ledger, Hyperparams::agnostic());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundViolated);
  }
  EXPECT_THROW(regret_check(ledger, Hyperparams::realizable()), Error);
}

}  // namespace
}  // namespace answerlearn
