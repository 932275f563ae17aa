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

// Release gate. Prints one PASS/FAIL line per criterion and exits non-zero if
// any criterion fails. Every check is exact except the Monte-Carlo mean and the
// high-probability fractions, whose tolerances are fixed below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "answerlearn/batch.hpp"
#include "answerlearn/experiments.hpp"
#include "answerlearn/instances.hpp"
#include "answerlearn/passk.hpp"
#include "answerlearn/sim.hpp"
#include "answerlearn/weights.hpp"

namespace al = answerlearn;

namespace {

constexpr std::size_t kCrossCheckMaxClass = 256;
constexpr std::size_t kSearchBudget = 2000;
constexpr std::size_t kSearchRounds = 32;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Exact-vs-float bookkeeping shared by the criteria that run weighted learners.
struct ModeLedger {
  std::size_t runs = 0;
  std::size_t disagreements = 0;
};
ModeLedger g_modes;

void note_run(const al::RunRecord& rec, bool checked) {
  if (!checked) return;
  ++g_modes.runs;
  g_modes.disagreements += rec.summary.mode_disagreements;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// |S| spread over 2..1024, X and Y varied by index.
al::ProblemInstance spread_instance(std::size_t i, std::size_t n, std::size_t min_actions) {
  al::RandomInstanceOptions o;
  o.num_hypotheses = 2 + (i * 1022) / (n - 1);
  o.num_contexts = 2 + i % 7;
  o.num_actions = min_actions + i % 4;
  o.seed = al::derive_seed(0xacce97, i);
  return al::random_instance(o);
}

al::RunRecord majority_lb_script(std::size_t d, const al::LearnerSpec& spec) {
  const al::ProblemInstance inst = al::majority_lb(d);
  al::ScriptedSource src;
  for (std::size_t t = 0; t < inst.model().num_contexts(); ++t) {
    src.contexts.push_back(al::context(t));
    src.labels.push_back(al::action(1));
  }
  return al::run_online(inst, spec, src);
}

al::ExperimentConfig config(const std::string& experiment, const std::string& instance, std::size_t trials) {
  al::ExperimentConfig c;
  c.experiment = experiment;
  c.instance = instance;
  c.trials = trials;
  c.seed = 20261019;
  c.delta = al::Rational(1, 10);
  c.epsilon = al::Rational(1, 5);
  return c;
}

std::size_t failing_rows(const al::ExperimentResult& r) {
  std::size_t n = 0;
  for (const auto& row : r.rows) n += row.pass ? 0 : 1;
  return n;
}

const std::size_t kScriptDims[] = {3, 5, 9, 33, 101};

Outcome realizable_bound() {
  Outcome o;
  const auto spec = al::LearnerSpec::weighted(al::Hyperparams::realizable());
  std::size_t runs = 0, violations = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const al::ProblemInstance inst = spread_instance(i, 200, 2);
    al::RunOptions opt;
    opt.cross_check_modes = inst.model().size() <= kCrossCheckMaxClass;
    const al::RunRecord rec = al::adversarial_search(inst, spec, kSearchRounds, kSearchBudget, i, opt);
    note_run(rec, opt.cross_check_modes);
    ++runs;
    if (!rec.summary.realizable || rec.summary.mistakes > al::floor_log(inst.model().size(), 2)) ++violations;
  }
  for (std::size_t d : kScriptDims) {
    const al::RunRecord rec = majority_lb_script(d, spec);
    ++runs;
    if (rec.summary.mistakes > al::floor_log(d, 2)) ++violations;
  }
  for (std::size_t d : {10, 100, 1000}) {
    const al::ProblemInstance inst = al::passk_lb_online(1, d);
    const std::size_t rounds = inst.model().num_contexts();
    al::RunOptions opt;
    opt.cross_check_modes = inst.model().size() <= kCrossCheckMaxClass;
    const al::RunRecord rec =
        al::run_online(inst, spec, al::AdversarialSource{std::make_shared<al::RevealingAdversary>(rounds)}, opt);
    note_run(rec, opt.cross_check_modes);
    ++runs;
    if (rec.summary.mistakes > al::floor_log(inst.model().size(), 2)) ++violations;
  }
  o.pass = violations == 0;
  o.detail = fmt("%zu runs, %zu over floor(log2|S|)", runs, violations);
  return o;
}

Outcome majority_and_ci() {
  Outcome o;
  std::size_t ci_runs = 0, ci_over = 0, maj_wrong = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const al::ProblemInstance inst = spread_instance(i, 200, 2);
    const al::RunRecord rec =
        al::adversarial_search(inst, al::LearnerSpec::common_intersection(), kSearchRounds, kSearchBudget, i);
    ++ci_runs;
    if (!rec.summary.realizable || rec.summary.mistakes > inst.model().size() - 1) ++ci_over;
  }
  for (std::size_t d : kScriptDims) {
    const al::RunRecord ci = majority_lb_script(d, al::LearnerSpec::common_intersection());
    ++ci_runs;
    if (ci.summary.mistakes > d - 1) ++ci_over;
    const al::RunRecord maj = majority_lb_script(d, al::LearnerSpec::majority());
    if (maj.summary.mistakes != (d - 1) / 2) ++maj_wrong;
  }
  o.pass = ci_over == 0 && maj_wrong == 0;
  o.detail = fmt("CI %zu runs, %zu over |S|-1; majority exact on %zu/5 scripts", ci_runs, ci_over, 5 - maj_wrong);
  return o;
}

Outcome statistical_lower_bound() {
  al::ExperimentConfig c = config("run-lower-bounds", "", 1000);
  c.which = "stat";
  const al::ExperimentResult r = al::run_experiment(c);
  const std::size_t bad = failing_rows(r);
  return {bad == 0 && r.rows.size() == 2 * 8 * 1000,
          fmt("%zu exact losses (majority and CI, m=1..8), %zu below 1/2", r.rows.size(), bad)};
}

al::ExperimentResult batch_run(const std::string& instance) {
  al::ExperimentConfig c = config("run-batch", instance, 400);
  c.grid = {1, 2, 3, 4, 8, 16, 32, 64, 128};
  return al::run_experiment(c);
}

Outcome online_to_batch() {
  std::vector<std::string> instances = {"majority_lb:d=33"};
  for (std::size_t i = 0; i < 20; ++i) {
    instances.push_back(fmt("random:S=%zu,X=%zu,Y=4,seed=%zu,demo=%s", std::size_t{8} << (i % 6), 2 + i % 3, 100 + i,
                            i % 2 ? "uniform" : "min"));
  }
  std::size_t mean_rows = 0, exact_rows = 0, bad = 0, disagreements = 0;
  for (const auto& inst : instances) {
    const al::ExperimentResult r = batch_run(inst);
    for (const auto& row : r.rows) {
      const bool mean = row.experiment == "run-batch/mean";
      const bool exact = row.experiment == "run-batch/exact";
      mean_rows += mean ? 1 : 0;
      exact_rows += exact ? 1 : 0;
      bad += row.pass ? 0 : 1;
    }
    disagreements += r.extra.value("mode_disagreements", std::size_t{0});
    ++g_modes.runs;
  }
  g_modes.disagreements += disagreements;
  return {bad == 0 && mean_rows == instances.size() * 9 && exact_rows > 0,
          fmt("%zu instances x 400 datasets: %zu mean rows, %zu exact rows, %zu failing", instances.size(), mean_rows,
              exact_rows, bad)};
}

Outcome mle_failures() {
  std::size_t rows = 0, bad = 0;
  for (const char* gamma : {"1/10", "1/4", "1/2"}) {
    for (const char* which : {"supp", "unif"}) {
      al::ExperimentConfig c = config("run-mle-failure", "", 10);
      c.which = which;
      c.gamma = al::parse_rational(gamma);
      c.grid = al::parse_grid("1..50");
      const al::ExperimentResult r = al::run_experiment(c);
      rows += r.rows.size();
      bad += failing_rows(r);
    }
  }
  return {bad == 0 && rows == 3 * 2 * 50 * 10, fmt("%zu datasets over m=1..50 and three gammas, %zu failing", rows, bad)};
}

Outcome fraction_criterion(const std::string& experiment, const std::string& instance, const std::string& which,
                           std::vector<std::size_t> grid = {}, const std::string& learner = "") {
  al::ExperimentConfig c = config(experiment, instance, 500);
  c.which = which;
  if (!learner.empty()) c.learner = learner;
  c.grid = std::move(grid);
  const al::ExperimentResult r = al::run_experiment(c);
  for (const auto& row : r.rows) {
    if (row.experiment.size() > 9 && row.experiment.ends_with("/fraction")) {
      return {row.pass && failing_rows(r) == 0,
              fmt("failure fraction %.4f over %zu trials, limit %.2f", row.observed, row.trial, row.bound_value)};
    }
  }
  return {false, "no fraction row"};
}

Outcome passk_bounds() {
  std::size_t runs = 0, over = 0, forced_wrong = 0, key_failures = 0;
  for (std::size_t k : {1, 2, 3, 5}) {
    const auto spec = al::LearnerSpec::passk(k);
    for (std::size_t i = 0; i < 40; ++i) {
      const al::ProblemInstance inst = spread_instance(i, 40, k + 1);
      al::RunOptions opt;
      opt.cross_check_modes = inst.model().size() <= kCrossCheckMaxClass;
      opt.check_key_inequality = true;
      const al::RunRecord rec = al::adversarial_search(inst, spec, kSearchRounds, kSearchBudget, i, opt);
      note_run(rec, opt.cross_check_modes);
      ++runs;
      key_failures += rec.summary.key_inequality_failures;
      if (!rec.summary.realizable || rec.summary.mistakes > al::floor_log(inst.model().size(), k + 1)) ++over;
    }
    for (std::size_t d : {10, 100, 1000}) {
      const al::ProblemInstance inst = al::passk_lb_online(k, d);
      al::RunOptions opt;
      opt.cross_check_modes = inst.model().size() <= kCrossCheckMaxClass;
      opt.check_key_inequality = true;
      const al::RunRecord rec = al::run_online(
          inst, spec, al::AdversarialSource{std::make_shared<al::RevealingAdversary>(inst.model().num_contexts())}, opt);
      note_run(rec, opt.cross_check_modes);
      ++runs;
      key_failures += rec.summary.key_inequality_failures;
      if (rec.summary.mistakes != al::floor_log(d, k + 1)) ++forced_wrong;
      if (rec.summary.mistakes > al::floor_log(inst.model().size(), k + 1)) ++over;
    }
  }
  return {over == 0 && forced_wrong == 0 && key_failures == 0,
          fmt("%zu runs: %zu over floor(log_{k+1}|S|), %zu lower-bound mismatches, %zu key-inequality failures", runs,
              over, forced_wrong, key_failures)};
}

Outcome agnostic_mode() {
  const al::Hyperparams params = al::Hyperparams::agnostic();
  std::size_t rounds = 0, monotone_failures = 0, regret_failures = 0, disagreements = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    al::RandomInstanceOptions o;
    o.num_hypotheses = 4 + 2 * i;
    o.num_contexts = 2 + i % 5;
    o.num_actions = 2 + i % 3;
    o.demonstrator = al::DemonstratorSpec::Kind::kSuboptimal;
    o.off_mass = al::Rational(static_cast<long>(i % 4), 8);
    o.seed = al::derive_seed(0xa9, i);
    const al::ProblemInstance inst = al::random_instance(o);
    const al::Dataset data = al::sample_dataset(inst, 200, o.seed);
    al::WeightState s = al::WeightState::create(inst.cls, params, al::WeightMode::kExact, true);
    al::Rational before = al::total_weight(s);
    for (const auto& z : data) {
      const al::ActionId y_hat = al::predict(s, z.x).action;
      if (al::predict(s, z.x, al::WeightMode::kLogFloat).action != y_hat) ++disagreements;
      al::update(s, z.x, y_hat, z.y);
      al::Rational after = al::total_weight(s);
      if (after > before) ++monotone_failures;
      before = std::move(after);
      ++rounds;
    }
    try {
      al::regret_check(al::MistakeLedger::from_state(s), params);
    } catch (const al::Error& e) {
      if (e.code() != al::ErrorCode::kBoundViolated) throw;
      ++regret_failures;
    }
  }
  g_modes.runs += 100;
  g_modes.disagreements += disagreements;
  const Outcome sqrt_form =
      fraction_criterion("run-agnostic", "random:S=32,X=6,Y=4,demo=suboptimal", "", {2000}, "alg1:agnostic");
  return {monotone_failures == 0 && regret_failures == 0 && sqrt_form.pass,
          fmt("%zu exact rounds, %zu weight increases, %zu regret failures; sqrt bound: %s", rounds, monotone_failures,
              regret_failures, sqrt_form.detail.c_str())};
}

Outcome reward_reduction() {
  al::ExperimentConfig c = config("run-batch", "random:S=8,X=4,Y=4", 50);
  c.which = "reward";
  c.grid = {1, 2, 4, 8, 16, 32, 64, 128};
  const al::ExperimentResult r = al::run_experiment(c);
  const std::size_t bad = failing_rows(r);
  return {bad == 0 && r.rows.size() == 50 * 8,
          fmt("%zu trained policies over 50 reward classes, %zu below opt - loss", r.rows.size(), bad)};
}

Outcome mode_agreement() {
  return {g_modes.disagreements == 0 && g_modes.runs > 0,
          fmt("%zu cross-checked runs, %zu disagreeing decisions", g_modes.runs, g_modes.disagreements)};
}

Outcome cloning() {
  std::size_t constants = 0, bad = 0;
  for (const auto& row : al::cloning_report(2)) {
    if (row.loss != 0) ++bad;
    if (row.estimator.rfind("constant", 0) == 0) {
      ++constants;
      if (row.mean_tv < al::Rational(1, 4)) ++bad;
    }
  }
  return {bad == 0 && constants > 0, fmt("%zu constant estimators, %zu violations", constants, bad)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  // Order matters: the mode-agreement tally reads what the earlier criteria recorded.
  const std::vector<Criterion> criteria = {
      {"realizable online mistake bound", realizable_bound},
      {"majority and common-intersection online bounds", majority_and_ci},
      {"majority/CI statistical lower bound", statistical_lower_bound},
      {"online-to-batch expected loss", online_to_batch},
      {"MLE failure constructions", mle_failures},
      {"MLE overlap", [] { return fraction_criterion("run-mle-overlap", "random:S=64,X=8,Y=4,dist=random", "overlap"); }},
      {"MLE positive control",
       [] { return fraction_criterion("run-mle-overlap", "random:S=64,X=8,Y=4,dist=random,demo=uniform", "positive"); }},
      {"pass@k upper and lower bounds", passk_bounds},
      {"agnostic mode", agnostic_mode},
      {"bounded-reward reduction", reward_reduction},
      {"exact and log-float decisions agree", mode_agreement},
      {"cloning impossibility report", cloning},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
