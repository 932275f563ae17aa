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

#include <set>
#include <sstream>

#include "answerlearn/instances.hpp"
#include "answerlearn/io.hpp"
#include "answerlearn/sim.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace answerlearn {
namespace {

using testing::for_cases;
using testing::Gen;

RandomInstanceOptions random_options(Gen& g) {
  RandomInstanceOptions o;
  o.num_contexts = g.range(1, 5);
  o.num_actions = g.range(1, 5);
  o.num_hypotheses = g.range(1, 20);
  o.random_distribution = g.coin();
  o.seed = g.rng()();
  using Kind = DemonstratorSpec::Kind;
  const Kind kinds[] = {Kind::kDeterministicMin, Kind::kDeterministicMax, Kind::kUniformSupport, Kind::kSuboptimal};
  o.demonstrator = kinds[g.range(0, 3)];
  return o;
}

TEST(RandomInstance, IsValidAndDeterministicInItsSeed) {
  for_cases(501, 100, [](Gen& g, std::size_t) {
    const RandomInstanceOptions o = random_options(g);
    const ProblemInstance a = random_instance(o);
    const ProblemInstance b = random_instance(o);
    EXPECT_TRUE(validate_instance(a).ok) << validate_instance(a).message;
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.model().size(), o.num_hypotheses);
    RandomInstanceOptions other = o;
    other.seed ^= 1;
    if (o.num_actions > 1 && o.num_contexts * o.num_hypotheses > 4) EXPECT_NE(random_instance(other).hash(), a.hash());
  });
}

TEST(Validation, FlagsDemonstratorMassOutsideTheTruth) {
  ProblemInstance inst = majority_lb(5);
  inst.demonstrator = DemonstratorSpec::from_table({{Rational(1, 2), Rational(1, 2)}, {Rational(0), Rational(1)}});
  const ValidationResult r = validate_instance(inst);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.code, ErrorCode::kDemonstratorViolation);
  inst.demonstrator = DemonstratorSpec::from_table({{Rational(0), Rational(1)}, {Rational(0), Rational(1)}});
  EXPECT_TRUE(validate_instance(inst).ok);
  inst.truth = inst.model().size();
  EXPECT_FALSE(validate_instance(inst).ok);
}

TEST(MajorityLowerBound, LayoutPutsTheTruthLast) {
  for (std::size_t d : {3u, 4u, 5u, 9u, 33u, 101u}) {
    const ProblemInstance inst = majority_lb(d);
    const std::size_t q = (d - 1) / 2;
    EXPECT_EQ(inst.model().num_contexts(), q);
    EXPECT_EQ(inst.model().size(), d);
    EXPECT_EQ(inst.truth, d - 1);
    for (std::size_t x = 0; x < q; ++x) {
      EXPECT_EQ(inst.model().support(inst.truth, context(x)), ActionSet(2, {1}));
      // Exactly two hypotheses exclude action 1 at x; the rest allow both.
      std::size_t anti = 0;
      for (std::size_t h = 0; h + 1 < d; ++h) {
        anti += inst.model().contains(h, context(x), action(1)) ? 0 : 1;
      }
      EXPECT_EQ(anti, 2u);
    }
  }
  EXPECT_THROW(majority_lb(2), Error);
}

TEST(SuboptimalDemonstrator, StoredLossesMatchRecomputation) {
  for_cases(502, 60, [](Gen& g, std::size_t) {
    auto cls = g.small_class();
    const std::size_t truth = g.range(0, cls->size() - 1);
    const ContextDistribution d = g.distribution(cls->num_contexts());
    const Rational off(static_cast<long>(g.range(0, 4)), 4);
    const DemonstratorSpec spec = suboptimal_demonstrator(*cls, truth, d, off);
    const Policy pi = table_policy(spec.table);
    for (std::size_t h = 0; h < cls->size(); ++h) {
      EXPECT_EQ(spec.losses[h], loss_exact(pi, d, cls->member(h)));
    }
    EXPECT_LE(spec.losses[truth], off);
  });
}

TEST(PassKStatLowerBound, IsTheFullProductClass) {
  const ProblemInstance inst = passk_lb_stat(2, 3);
  EXPECT_EQ(inst.model().num_actions(), 4u);
  EXPECT_EQ(inst.model().size(), 64u);
  EXPECT_THROW(passk_lb_stat(4, 12, 1000), Error);
}

TEST(CloningReport, ConstantEstimatorsStayFarAndEveryEstimatorIsCorrect) {
  const auto rows = cloning_report(2);
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) {
    EXPECT_EQ(r.loss, 0) << r.estimator;
    if (r.estimator.rfind("constant", 0) == 0) EXPECT_GE(r.mean_tv, Rational(1, 4)) << r.estimator;
  }
  EXPECT_THROW(cloning_report(5), Error);
}

TEST(Sampling, DatasetsAreReproducibleAndRealizable) {
  for_cases(503, 60, [](Gen& g, std::size_t) {
    RandomInstanceOptions o = random_options(g);
    o.demonstrator = DemonstratorSpec::Kind::kUniformSupport;
    const ProblemInstance inst = random_instance(o);
    const std::uint64_t seed = g.rng()();
    const Dataset a = sample_dataset(inst, 30, seed);
    EXPECT_EQ(a, sample_dataset(inst, 30, seed));
    for (const auto& z : a) EXPECT_TRUE(inst.model().contains(inst.truth, z.x, z.y));
  });
}

TEST(RunOnline, ReplayOfATranscriptReproducesIt) {
  for_cases(504, 60, [](Gen& g, std::size_t) {
    const ProblemInstance inst = random_instance(random_options(g));
    const LearnerSpec spec = g.coin() ? LearnerSpec::weighted(Hyperparams::realizable()) : LearnerSpec::majority();
    const RunRecord first = run_online(inst, spec, SampledSource{25, g.rng()()});
    const RunRecord again = run_online(inst, spec, ScriptedSource::from_dataset(first.dataset()));
    ASSERT_EQ(first.rounds.size(), again.rounds.size());
    for (std::size_t t = 0; t < first.rounds.size(); ++t) {
      EXPECT_EQ(first.rounds[t].y_hat, again.rounds[t].y_hat);
      EXPECT_EQ(first.rounds[t].total_weight, again.rounds[t].total_weight);
    }
    EXPECT_EQ(first.summary.mistakes, again.summary.mistakes);
  });
}

TEST(RunOnline, RealizableMistakesStayWithinTheBound) {
  for_cases(505, 100, [](Gen& g, std::size_t) {
    RandomInstanceOptions o = random_options(g);
    o.num_hypotheses = g.range(1, 64);
    const ProblemInstance inst = random_instance(o);
    RunOptions opt;
    opt.cross_check_modes = true;
    opt.check_monotone = true;
    const RunRecord r = run_online(inst, LearnerSpec::weighted(Hyperparams::realizable()), SampledSource{60, o.seed}, opt);
    if (!r.summary.realizable) return;
    ASSERT_TRUE(r.summary.bound.has_value());
    EXPECT_LE(r.summary.mistakes, *r.summary.bound);
    EXPECT_LE(r.summary.mistakes, floor_log(inst.model().size(), 2));
    EXPECT_EQ(r.summary.mode_disagreements, 0u);
    EXPECT_EQ(r.summary.monotone_failures, 0u);
  });
}

TEST(RunOnline, RejectsLabelsOutsideTheTruth) {
  const ProblemInstance inst = majority_lb(5);
  ScriptedSource s;
  s.contexts = {context(0)};
  s.labels = {action(0)};
  try {
    run_online(inst, LearnerSpec::majority(), s);
    FAIL() << "expected a violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDemonstratorViolation);
  }
}

TEST(RevealingAdversary, ForcesAMistakeEveryRound) {
  for (std::size_t k : {1u, 2u, 3u}) {
    for (std::size_t d : {10u, 100u}) {
      const ProblemInstance inst = passk_lb_online(k, d);
      const std::size_t rounds = inst.model().num_contexts();
      EXPECT_EQ(rounds, floor_log(d, k + 1));
      RunOptions opt;
      opt.check_key_inequality = true;
      const RunRecord r =
          run_online(inst, LearnerSpec::passk(k), AdversarialSource{std::make_shared<RevealingAdversary>(rounds)}, opt);
      EXPECT_EQ(r.summary.mistakes, rounds);
      EXPECT_TRUE(r.summary.realizable);
      EXPECT_EQ(r.summary.key_inequality_failures, 0u);
    }
  }
}

TEST(AdversarialSearch, NeverDoesWorseThanTheBaselineScript) {
  for_cases(506, 30, [](Gen& g, std::size_t) {
    const ProblemInstance inst = random_instance(random_options(g));
    const LearnerSpec spec = LearnerSpec::weighted(Hyperparams::realizable());
    const RunRecord base = adversarial_search(inst, spec, 20, 0, 3);
    const RunRecord searched = adversarial_search(inst, spec, 20, 400, 3);
    EXPECT_GE(searched.summary.mistakes, base.summary.mistakes);
    EXPECT_TRUE(searched.summary.within_bound);
  });
}

TEST(Io, InstancesRoundTripThroughJson) {
  for_cases(507, 60, [](Gen& g, std::size_t) {
    const ProblemInstance inst = random_instance(random_options(g));
    const ProblemInstance back = instance_from_json(Json::parse(to_json(inst).dump()));
    EXPECT_EQ(back.hash(), inst.hash());
    EXPECT_EQ(back.truth, inst.truth);
    EXPECT_EQ(back.distribution.probs(), inst.distribution.probs());
    EXPECT_EQ(back.demonstrator.table, inst.demonstrator.table);
    EXPECT_EQ(back.demonstrator.losses, inst.demonstrator.losses);
  });
}

TEST(Io, RationalsAcceptIntegersFloatsAndFractions) {
  EXPECT_EQ(rational_from_json(Json(3)), Rational(3));
  EXPECT_EQ(rational_from_json(Json(0.25)), Rational(1, 4));
  EXPECT_EQ(rational_from_json(Json("2/6")), Rational(1, 3));
  EXPECT_THROW(rational_from_json(Json::array()), Error);
}

TEST(Io, ModelClassRejectsMalformedDocuments) {
  EXPECT_THROW(model_class_from_json(Json::parse(R"({"num_contexts":1,"num_actions":2,"members":[{"supports":[[]]}]})")),
               Error);
  EXPECT_THROW(model_class_from_json(Json::parse(R"({"num_contexts":1,"num_actions":2,"members":[{"supports":[[5]]}]})")),
               Error);
  const ModelClass ok = model_class_from_json(
      Json::parse(R"({"num_contexts":2,"num_actions":3,"members":[{"name":"f","supports":[[0,2],[1]]}]})"));
  EXPECT_EQ(ok.support(0, context(0)), ActionSet(3, {0, 2}));
  EXPECT_EQ(model_class_from_json(to_json(ok)).content_hash(), ok.content_hash());
}

TEST(Io, TranscriptHasAHeaderAndOneLinePerRound) {
  const ProblemInstance inst = majority_lb(9);
  const RunRecord r = run_online(inst, LearnerSpec::weighted(Hyperparams::realizable()), SampledSource{12, 5});
  std::ostringstream out;
  write_transcript(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const Json doc = Json::parse(line);
    if (lines > 0) {
      EXPECT_EQ(doc.at("t").get<std::size_t>(), lines - 1);
      EXPECT_TRUE(doc.contains("W_t"));
    }
    ++lines;
  }
  EXPECT_EQ(lines, 13u);
}

}  // namespace
}  // namespace answerlearn
