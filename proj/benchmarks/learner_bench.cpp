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

#include <benchmark/benchmark.h>

#include "answerlearn/batch.hpp"
#include "answerlearn/instances.hpp"
#include "answerlearn/passk.hpp"
#include "answerlearn/sim.hpp"
#include "answerlearn/weights.hpp"

namespace {

using namespace answerlearn;

ProblemInstance bench_instance(std::size_t hypotheses, std::size_t actions) {
  RandomInstanceOptions o;
  o.num_hypotheses = hypotheses;
  o.num_contexts = 16;
  o.num_actions = actions;
  o.seed = 42;
  return random_instance(o);
}

// A state some way into a realizable run, so weights are not all equal.
WeightState warmed(const ProblemInstance& inst, WeightState s, std::size_t rounds) {
  for (const auto& z : sample_dataset(inst, rounds, 7)) {
    if (s.scheme() == WeightScheme::kBoost) {
      update_k(s, z.x, predict_k(s, z.x, s.k(), false), z.y);
    } else {
      update(s, z.x, predict(s, z.x).action, z.y);
    }
  }
  return s;
}

void BM_Predict(benchmark::State& state) {
  const auto inst = bench_instance(static_cast<std::size_t>(state.range(0)), 8);
  const auto mode = state.range(1) == 0 ? WeightMode::kExact : WeightMode::kLogFloat;
  const WeightState s = warmed(inst, WeightState::create(inst.cls, Hyperparams::agnostic(), mode), 64);
  std::size_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(s, context(x)));
    x = (x + 1) % inst.model().num_contexts();
  }
}
BENCHMARK(BM_Predict)->ArgsProduct({{64, 1024, 16384}, {0, 1}});

void BM_PredictK(benchmark::State& state) {
  const auto inst = bench_instance(static_cast<std::size_t>(state.range(0)), 8);
  const std::size_t k = static_cast<std::size_t>(state.range(1));
  const WeightState s = warmed(inst, WeightState::create_boost(inst.cls, k), 64);
  std::size_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_k(s, context(x), k, false));
    x = (x + 1) % inst.model().num_contexts();
  }
}
BENCHMARK(BM_PredictK)->ArgsProduct({{64, 1024, 16384}, {1, 3}});

void BM_OnlineToBatch(benchmark::State& state) {
  const auto inst = bench_instance(256, 8);
  const Dataset data = sample_dataset(inst, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    O2bOptions opt;
    opt.keep_snapshots = false;
    const SnapshotMixture mix = train_o2b(inst.cls, data, Hyperparams::realizable(), opt);
    benchmark::DoNotOptimize(loss_exact(mix.as_policy(), inst.distribution, inst.truth_support()));
  }
}
BENCHMARK(BM_OnlineToBatch)->Arg(32)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
