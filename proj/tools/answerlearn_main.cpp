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

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "answerlearn/experiments.hpp"
#include "answerlearn/io.hpp"

namespace {

using answerlearn::ExperimentConfig;

// Raw flag values; anything set overrides the config file.
struct Flags {
  std::string config;
  std::optional<std::string> instance, learner, grid, delta, epsilon, gamma, which, out;
  std::optional<std::size_t> trials, k, budget, jobs;
  std::optional<std::uint64_t> seed;
  bool transcripts = false;
  bool svg = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--instance", f.instance, "instance spec, e.g. random:S=64 or file:inst.json");
  cmd->add_option("--learner", f.learner, "alg1:realizable | alg1:agnostic | alg1:alpha=p/q,beta=p/q | passk:k=2 | majority | ci");
  cmd->add_option("--m,--T,--grid", f.grid, "grid of sample sizes or horizons: 1..50, 1,2,4 or geom:1..128");
  cmd->add_option("--trials", f.trials);
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--delta", f.delta);
  cmd->add_option("--epsilon", f.epsilon);
  cmd->add_option("--gamma", f.gamma);
  cmd->add_option("--k", f.k);
  cmd->add_option("--budget", f.budget, "adversarial search budget (0: sampled sequences)");
  cmd->add_option("--which", f.which, "experiment variant");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--jobs", f.jobs, "worker threads (default ANSWERLEARN_JOBS or 1)");
  cmd->add_flag("--transcripts", f.transcripts, "write per-run JSONL transcripts");
  cmd->add_flag("--svg", f.svg, "write curves.svg");
}

ExperimentConfig resolve(const std::string& experiment, const Flags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) c = ExperimentConfig::from_json(answerlearn::read_json_file(f.config));
  c.experiment = experiment;
  if (f.instance) c.instance = *f.instance;
  if (f.learner) c.learner = *f.learner;
  if (f.grid) c.grid = answerlearn::parse_grid(*f.grid);
  if (f.trials) c.trials = *f.trials;
  if (f.seed) c.seed = *f.seed;
  if (f.delta) c.delta = answerlearn::parse_rational(*f.delta);
  if (f.epsilon) c.epsilon = answerlearn::parse_rational(*f.epsilon);
  if (f.gamma) c.gamma = answerlearn::parse_rational(*f.gamma);
  if (f.k) c.k = *f.k;
  if (f.budget) c.budget = *f.budget;
  if (f.which) c.which = *f.which;
  if (f.out) c.output_dir = *f.out;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.transcripts) c.transcripts = true;
  if (f.svg) c.svg = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments for learning from answer sets"};
  app.require_subcommand(1);
  const std::map<std::string, std::string> commands = {
      {"run-online", "online mistake counts against the mistake bound"},
      {"run-batch", "online-to-batch expected loss curves (--which reward: value reduction)"},
      {"run-passk", "pass@k list learner mistakes"},
      {"run-mle-failure", "maximum-likelihood failure constructions (--which supp|unif)"},
      {"run-mle-overlap", "likelihood maximizer overlap (--which overlap|positive)"},
      {"run-agnostic", "suboptimal demonstrators (--which monotone adds exact weight checks)"},
      {"run-lower-bounds", "lower-bound streams (--which majority|ci|stat|passk|all)"},
      {"run-cloning-report", "distribution-matching report on the cloning instance"},
      {"sweep", "one experiment (--which) over ';'-separated instances"},
      {"validate-instance", "validate an instance spec or file"},
  };
  std::map<std::string, Flags> flags;
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags[name]);
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig config = resolve(name, flags[name]);
    answerlearn::ExperimentResult result = answerlearn::run_experiment(config);
    const int code = answerlearn::write_artifacts(config, result);
    std::cout << answerlearn::summary_json(name, result).dump(2) << '\n';
    return code;
  } catch (const answerlearn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
