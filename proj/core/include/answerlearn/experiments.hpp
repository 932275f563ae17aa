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

#ifndef ANSWERLEARN_EXPERIMENTS_HPP_
#define ANSWERLEARN_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "answerlearn/instances.hpp"
#include "answerlearn/rational.hpp"
#include "answerlearn/sim.hpp"

namespace answerlearn {

struct ExperimentConfig {
  std::string experiment;
  std::string instance = "random:S=16";
  std::string learner = "alg1:realizable";
  std::vector<std::size_t> grid;  // m values or T values
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  Rational delta{1, 10};
  Rational epsilon{1, 5};
  Rational gamma{1, 2};
  std::size_t k = 2;
  std::size_t budget = 0;
  std::string which;  // experiment-specific variant selector
  std::filesystem::path output_dir = "out";
  std::size_t jobs = 0;  // 0: ANSWERLEARN_JOBS or 1
  bool transcripts = false;
  bool svg = false;

  nlohmann::json to_json() const;
  // Unknown keys throw kConfigError.
  static ExperimentConfig from_json(const nlohmann::json& doc);
};

struct ResultRow {
  std::string experiment;
  std::uint64_t instance_hash = 0;
  std::string learner;
  std::size_t m_or_t = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string observed_exact;
  double observed = 0.0;
  std::string bound;
  double bound_value = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  nlohmann::json extra = nlohmann::json::object();
  std::vector<RunRecord> transcripts;

  bool pass() const;
  double worst_slack() const;
};

// "1..50", "1,2,4", "geom:1..128" (powers of two).
std::vector<std::size_t> parse_grid(std::string_view text);

// Instance specs: random:S=..,X=..,Y=..,density=p/q,seed=..,dist=uniform|random,demo=min|uniform;
// majority_lb:d=..; mle_failure_supp:m=..,gamma=..; mle_failure_unif:gamma=..;
// passk_lb_online:k=..,d=..; passk_lb_stat:k=..,q=..; cloning:m=..; file:path.
// Random specs without a seed draw a fresh instance from `fallback_seed`.
ProblemInstance make_instance(std::string_view spec, std::uint64_t fallback_seed);

// alg1:realizable|agnostic|majority|alpha=p/q,beta=p/q; passk:k=..; majority; ci.
LearnerSpec parse_learner(std::string_view spec);

std::size_t default_jobs();

// Runs fn(i) for i in [0, n) on `jobs` workers; results keep index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, std::size_t jobs, const std::function<T(std::size_t)>& fn);

ExperimentResult run_experiment(const ExperimentConfig& config);

// Sorts rows and writes results.csv, summary.json, curves, and transcripts.
// Returns the process exit code (0 iff every row passes).
int write_artifacts(const ExperimentConfig& config, ExperimentResult& result);

std::string results_csv(std::vector<ResultRow> rows);
nlohmann::json summary_json(const std::string& experiment, const ExperimentResult& result);

struct CurvePoint {
  std::size_t x = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double bound = 0.0;
};

struct Curve {
  std::string learner;
  std::uint64_t instance_hash = 0;
  std::vector<CurvePoint> points;
};

// Per (learner, instance, x) means with normal 95% intervals and the bound.
std::vector<Curve> aggregate_curves(const std::vector<ResultRow>& rows);
std::string curves_csv(const std::vector<Curve>& curves);
nlohmann::json curves_json(const std::vector<Curve>& curves);
std::string curves_svg(const std::vector<Curve>& curves, const std::string& title);

}  // namespace answerlearn

#include "answerlearn/detail/parallel.hpp"

#endif  // ANSWERLEARN_EXPERIMENTS_HPP_
