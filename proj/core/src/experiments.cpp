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

#include "answerlearn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "answerlearn/batch.hpp"
#include "answerlearn/io.hpp"
#include "answerlearn/mle.hpp"
#include "answerlearn/passk.hpp"

namespace answerlearn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// "name:key=value,key=value" -> name and key map.
struct Spec {
  std::string name;
  std::map<std::string, std::string> args;

  bool has(const std::string& key) const { return args.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
  }
  std::size_t size(const std::string& key, std::size_t fallback) const {
    auto it = args.find(key);
    if (it == args.end()) return fallback;
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, "'" + key + "' expects an integer, got '" + it->second + "'");
    }
  }
  Rational rational(const std::string& key, const Rational& fallback) const {
    auto it = args.find(key);
    if (it == args.end()) return fallback;
    try {
      return parse_rational(it->second);
    } catch (const Error&) {
      throw Error(ErrorCode::kConfigError, "'" + key + "' expects a number, got '" + it->second + "'");
    }
  }
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, value] : args) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        throw Error(ErrorCode::kConfigError, "unknown key '" + key + "' in spec '" + name + "'");
      }
    }
  }
};

Spec parse_spec(std::string_view text) {
  Spec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  if (spec.name == "file") {
    spec.args["path"] = std::string(rest);
    return spec;
  }
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    // Bare words are flags ("alg1:agnostic").
    if (eq == std::string_view::npos) {
      spec.args[std::string(item)] = "";
    } else {
      spec.args[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    out.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  if (s.empty()) throw Error(ErrorCode::kConfigError, "empty grid entry");
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(ErrorCode::kConfigError, "bad grid entry '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

double log_base(double value, double base) { return std::log(value) / std::log(base); }

// Half-width of a normal 95% interval for the mean.
double half_width(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

ResultRow base_row(const std::string& experiment, const ProblemInstance& inst, const std::string& learner,
                   std::size_t x, std::size_t trial, std::uint64_t seed) {
  ResultRow row;
  row.experiment = experiment;
  row.instance_hash = inst.hash();
  row.learner = learner;
  row.m_or_t = x;
  row.trial = trial;
  row.seed = seed;
  return row;
}

void set_observed(ResultRow& row, const Rational& v) {
  row.observed_exact = to_string(v);
  row.observed = to_double(v);
}

void no_bound(ResultRow& row) {
  row.bound.clear();
  row.bound_value = kInf;
  row.slack = kInf;
}

// observed <= bound
void upper(ResultRow& row, const Rational& observed, const Rational& bound) {
  set_observed(row, observed);
  row.bound = to_string(bound);
  row.bound_value = to_double(bound);
  row.slack = row.bound_value - row.observed;
  row.pass = row.pass && observed <= bound;
}

void upper(ResultRow& row, const Rational& observed, double bound) {
  set_observed(row, observed);
  row.bound = fmt(bound);
  row.bound_value = bound;
  row.slack = bound - row.observed;
  row.pass = row.pass && row.observed <= bound;
}

// observed >= bound
void lower(ResultRow& row, const Rational& observed, const Rational& bound) {
  set_observed(row, observed);
  row.bound = to_string(bound);
  row.bound_value = to_double(bound);
  row.slack = row.observed - row.bound_value;
  row.pass = row.pass && observed >= bound;
}

std::uint64_t trial_seed(const ExperimentConfig& c, std::size_t trial) { return derive_seed(c.seed, trial); }
std::uint64_t data_seed(std::uint64_t ts, std::size_t x) { return derive_seed(ts, 1000 + x); }

std::size_t jobs_of(const ExperimentConfig& c) { return c.jobs == 0 ? default_jobs() : c.jobs; }

bool cross_checkable(const ModelClass& cls) { return cls.size() <= 256; }

// Pr_x[prediction of `state` misses the truth] for the snapshot predictor.
Rational snapshot_loss(const WeightState& state, const LearnerSpec& spec, const ProblemInstance& inst,
                       const SupportFunction& truth) {
  Rational loss = 0;
  for (std::size_t i = 0; i < inst.model().num_contexts(); ++i) {
    const ContextId x = context(i);
    bool hit = false;
    if (spec.kind == LearnerSpec::Kind::kPassK) {
      for (ActionId y : predict_k(state, x, spec.k, false).actions) hit = hit || truth(x).contains(y);
    } else {
      hit = truth(x).contains(predict(state, x).action);
    }
    if (!hit) loss += inst.distribution[x];
  }
  return loss;
}

WeightState initial_state(const ProblemInstance& inst, const LearnerSpec& spec) {
  if (spec.kind == LearnerSpec::Kind::kPassK) return WeightState::create_boost(inst.cls, spec.k, spec.mode);
  if (spec.kind != LearnerSpec::Kind::kWeighted) {
    throw Error(ErrorCode::kConfigError, "batch experiments need a weighted or pass@k learner");
  }
  return WeightState::create(inst.cls, spec.params, spec.mode, spec.require_monotone);
}

void advance(WeightState& state, const LearnerSpec& spec, ContextId x, ActionId y) {
  if (spec.kind == LearnerSpec::Kind::kPassK) {
    update_k(state, x, predict_k(state, x, spec.k, false), y);
  } else {
    update(state, x, predict(state, x).action, y);
  }
}

// E over i.i.d. prefixes of the t-th snapshot loss, t = 0..depth-1, by full
// enumeration of (x, y) sequences.
std::vector<Rational> enumerate_snapshot_losses(const ProblemInstance& inst, const LearnerSpec& spec,
                                                std::size_t depth) {
  const Policy demo = inst.demonstrator_policy();
  const SupportFunction truth = inst.truth_support();
  std::vector<std::vector<Rational>> probs;
  for (std::size_t x = 0; x < inst.model().num_contexts(); ++x) probs.push_back(action_probs(demo, context(x)));
  std::vector<Rational> out(depth, Rational(0));
  std::function<void(const WeightState&, std::size_t, const Rational&)> walk =
      [&](const WeightState& state, std::size_t t, const Rational& p) {
        out[t] += p * snapshot_loss(state, spec, inst, truth);
        if (t + 1 == depth) return;
        for (std::size_t x = 0; x < probs.size(); ++x) {
          for (std::size_t y = 0; y < probs[x].size(); ++y) {
            if (probs[x][y] == 0) continue;
            WeightState next = state;
            advance(next, spec, context(x), action(y));
            walk(next, t + 1, p * inst.distribution[context(x)] * probs[x][y]);
          }
        }
      };
  walk(initial_state(inst, spec), 0, Rational(1));
  return out;
}

double class_log(const ModelClass& cls, const LearnerSpec& spec) {
  return spec.kind == LearnerSpec::Kind::kPassK ? log_base(static_cast<double>(cls.size()), spec.k + 1.0)
                                                : std::log2(static_cast<double>(cls.size()));
}

using TrialOut = std::pair<std::vector<ResultRow>, std::vector<RunRecord>>;

ExperimentResult collect(std::vector<TrialOut> outs, bool keep_transcripts) {
  ExperimentResult result;
  for (auto& [rows, records] : outs) {
    for (auto& r : rows) result.rows.push_back(std::move(r));
    if (keep_transcripts) {
      for (auto& rec : records) result.transcripts.push_back(std::move(rec));
    }
  }
  return result;
}

// Per trial: one run of length T per grid value, sampled or adversarially searched.
ExperimentResult run_online_experiment(const ExperimentConfig& c, const LearnerSpec& spec) {
  const std::vector<std::size_t> grid = c.grid.empty() ? std::vector<std::size_t>{100} : c.grid;
  const std::size_t n = c.trials * grid.size();
  auto outs = parallel_map<TrialOut>(n, jobs_of(c), [&](std::size_t i) {
    const std::size_t trial = i / grid.size();
    const std::size_t T = grid[i % grid.size()];
    const std::uint64_t ts = trial_seed(c, trial);
    const ProblemInstance inst = make_instance(c.instance, ts);
    RunOptions opts;
    opts.cross_check_modes = cross_checkable(inst.model());
    opts.check_key_inequality = spec.kind == LearnerSpec::Kind::kPassK;
    opts.record_total_weight = c.transcripts;
    const std::uint64_t ds = data_seed(ts, T);
    RunRecord rec = c.budget > 0 || inst.demonstrator.kind == DemonstratorSpec::Kind::kAdaptive
                        ? adversarial_search(inst, spec, T, c.budget, ds, opts)
                        : run_online(inst, spec, SampledSource{T, ds}, opts);
    ResultRow row = base_row(c.experiment, inst, rec.learner, T, trial, ds);
    const RunSummary& s = rec.summary;
    row.pass = s.mode_disagreements == 0 && s.key_inequality_failures == 0 && s.monotone_failures == 0;
    if (s.bound && s.realizable) {
      upper(row, Rational(s.mistakes), Rational(*s.bound));
    } else {
      set_observed(row, Rational(s.mistakes));
      no_bound(row);
    }
    return TrialOut{{row}, {std::move(rec)}};
  });
  ExperimentResult result = collect(std::move(outs), c.transcripts);
  std::size_t disagreements = 0;
  for (const auto& r : result.rows) disagreements += r.pass ? 0 : 1;
  result.extra["failing_rows"] = disagreements;
  return result;
}

// Online-to-batch: one dataset of the largest m per trial; the mixture over the
// first m snapshots is the m-sample predictor, so prefix averages give every m.
ExperimentResult run_batch_experiment(const ExperimentConfig& c, const LearnerSpec& spec) {
  const std::vector<std::size_t> grid = c.grid.empty() ? parse_grid("geom:1..128") : c.grid;
  const std::size_t m_max = *std::max_element(grid.begin(), grid.end());
  if (m_max == 0) throw Error(ErrorCode::kConfigError, "sample sizes must be positive");
  struct Trial {
    std::vector<ResultRow> rows;
    std::vector<Rational> losses;  // per grid entry
    std::uint64_t hash = 0;
    std::uint64_t trial_seed = 0;
    double log_size = 0.0;
    std::size_t disagreements = 0;
  };
  auto trials = parallel_map<Trial>(c.trials, jobs_of(c), [&](std::size_t trial) {
    const std::uint64_t ts = trial_seed(c, trial);
    const ProblemInstance inst = make_instance(c.instance, ts);
    const SupportFunction truth = inst.truth_support();
    const std::uint64_t ds = data_seed(ts, m_max);
    const Dataset data = sample_dataset(inst, m_max, ds);
    O2bOptions opts;
    opts.mode = spec.mode;
    opts.keep_snapshots = false;
    opts.cross_check = cross_checkable(inst.model());
    O2bStats stats;
    const SnapshotMixture mix = spec.kind == LearnerSpec::Kind::kPassK
                                    ? train_o2b_passk(inst.cls, data, spec.k, opts, &stats)
                                    : train_o2b(inst.cls, data, spec.params, opts, &stats);
    std::vector<Rational> prefix(m_max + 1, Rational(0));
    for (std::size_t t = 0; t < m_max; ++t) {
      Rational loss = 0;
      for (std::size_t x = 0; x < inst.model().num_contexts(); ++x) {
        bool hit = false;
        for (ActionId y : mix.predictions[t][x]) hit = hit || truth(context(x)).contains(y);
        if (!hit) loss += inst.distribution[context(x)];
      }
      prefix[t + 1] = prefix[t] + loss;
    }
    Trial out;
    out.hash = inst.hash();
    out.trial_seed = ts;
    out.log_size = class_log(inst.model(), spec);
    out.disagreements = stats.mode_disagreements;
    for (std::size_t m : grid) {
      ResultRow row = base_row(c.experiment, inst, spec.label(), m, trial, ds);
      const Rational loss = prefix[m] / m;
      set_observed(row, loss);
      no_bound(row);
      row.pass = stats.mode_disagreements == 0;
      out.rows.push_back(std::move(row));
      out.losses.push_back(loss);
    }
    return out;
  });

  ExperimentResult result;
  std::map<std::uint64_t, std::vector<const Trial*>> by_instance;
  for (const auto& t : trials) {
    for (const auto& r : t.rows) result.rows.push_back(r);
    by_instance[t.hash].push_back(&t);
  }
  // Exact expectation over all datasets when the enumeration is small. It
  // depends only on the instance, so it runs once per distinct instance.
  auto exact_rows = [&](const Trial& first, std::size_t trials_seen) {
    const ProblemInstance inst = make_instance(c.instance, first.trial_seed);
    const ModelClass& cls = inst.model();
    if (inst.demonstrator.kind == DemonstratorSpec::Kind::kAdaptive || cls.num_contexts() > 4 ||
        cls.num_contexts() * cls.num_actions() > 16) {
      return;
    }
    std::size_t depth = 0;
    for (std::size_t m : grid) depth = std::max(depth, m <= 3 ? m : 0);
    if (depth == 0) return;
    const auto expected = enumerate_snapshot_losses(inst, spec, depth);
    Rational sum = 0;
    for (std::size_t m = 1; m <= depth; ++m) {
      sum += expected[m - 1];
      if (std::find(grid.begin(), grid.end(), m) == grid.end()) continue;
      ResultRow row = base_row(c.experiment + "/exact", inst, spec.label(), m, trials_seen, first.trial_seed);
      upper(row, sum / m, first.log_size / static_cast<double>(m));
      result.rows.push_back(std::move(row));
    }
  };
  // Monte-Carlo means per instance, against the envelope plus three CI half-widths.
  Json envelopes = Json::array();
  for (const auto& [hash, group] : by_instance) {
    exact_rows(*group.front(), group.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const std::size_t m = grid[g];
      std::vector<double> xs;
      Rational sum = 0;
      for (const Trial* t : group) {
        xs.push_back(to_double(t->losses[g]));
        sum += t->losses[g];
      }
      const double hw = half_width(xs);
      const double envelope = group.front()->log_size / static_cast<double>(m);
      ResultRow row;
      row.experiment = c.experiment + "/mean";
      row.instance_hash = hash;
      row.learner = spec.label();
      row.m_or_t = m;
      row.trial = group.size();
      row.seed = c.seed;
      upper(row, sum / static_cast<long>(group.size()), envelope + 3.0 * hw);
      result.rows.push_back(std::move(row));
      // Both readings of the high-probability constant, for the record.
      if (m >= 2) {
        const double d = to_double(c.delta);
        const double ls = std::exp(group.front()->log_size * std::log(2.0));
        const double natural = (1 + 2 * std::log(ls) + 12 * std::log(2 * std::log(m) / d)) / m;
        const double binary = (1 + 2 * std::log2(ls) + 12 * std::log2(2 * std::log2(m) / d)) / m;
        std::size_t over_natural = 0, over_binary = 0;
        for (double x : xs) {
          over_natural += x > natural ? 1 : 0;
          over_binary += x > binary ? 1 : 0;
        }
        envelopes.push_back({{"instance_hash", hex(hash)}, {"m", m}, {"natural_log_bound", fmt(natural)},
                             {"base2_bound", fmt(binary)}, {"exceed_natural", over_natural},
                             {"exceed_base2", over_binary}, {"trials", xs.size()}});
      }
    }
  }
  if (spec.kind == LearnerSpec::Kind::kWeighted) result.extra["high_probability_envelopes"] = std::move(envelopes);
  std::size_t disagreements = 0;
  for (const auto& t : trials) disagreements += t.disagreements;
  result.extra["mode_disagreements"] = disagreements;
  return result;
}

// Reward classes: the mixture's value against value(optimal) - loss vs sigma_{r*}.
ExperimentResult run_reward_experiment(const ExperimentConfig& c, const LearnerSpec& spec) {
  const Spec inst_spec = parse_spec(c.instance);
  const std::size_t nx = inst_spec.size("X", 4), ny = inst_spec.size("Y", 4), ns = inst_spec.size("S", 8);
  const std::vector<std::size_t> grid = c.grid.empty() ? parse_grid("geom:1..32") : c.grid;
  const std::size_t m_max = *std::max_element(grid.begin(), grid.end());
  auto outs = parallel_map<TrialOut>(c.trials, jobs_of(c), [&](std::size_t trial) {
    const std::uint64_t ts = trial_seed(c, trial);
    const RewardClass rewards = random_reward_class(nx, ny, ns, inst_spec.size("seed", ts));
    SplitMix64 rng(ts);
    const std::size_t star = rng.uniform_below(rewards.members.size());
    const RewardFunction& r = rewards.members[star];
    ProblemInstance inst;
    inst.cls = std::make_shared<ModelClass>(reward_class_to_model_class(rewards));
    inst.distribution = ContextDistribution::uniform(nx);
    const SupportFunction truth = support_of_reward(r);
    for (std::size_t h = 0; h < inst.cls->size(); ++h) {
      if (inst.cls->member(h) == truth) inst.truth = h;
    }
    inst.demonstrator = DemonstratorSpec::uniform_support();
    inst.provenance = "reward(X=" + std::to_string(nx) + ",Y=" + std::to_string(ny) + ",S=" + std::to_string(ns) + ")";
    const std::uint64_t ds = data_seed(ts, m_max);
    const Dataset data = sample_dataset(inst, m_max, ds);
    const SnapshotMixture full = train_o2b(inst.cls, data, spec.params, {WeightMode::kExact, false, false});
    const Rational opt = optimal_value(inst.distribution, r);
    std::vector<ResultRow> rows;
    for (std::size_t m : grid) {
      SnapshotMixture mix = full;
      mix.predictions.resize(m);
      const Policy policy = mix.as_policy();
      ResultRow row = base_row(c.experiment, inst, spec.label(), m, trial, ds);
      lower(row, value_exact(policy, inst.distribution, r), opt - loss_exact(policy, inst.distribution, truth));
      rows.push_back(std::move(row));
    }
    return TrialOut{std::move(rows), {}};
  });
  return collect(std::move(outs), false);
}

ExperimentResult run_mle_failure_experiment(const ExperimentConfig& c) {
  const std::string which = c.which.empty() ? "supp" : c.which;
  if (which != "supp" && which != "unif") throw Error(ErrorCode::kConfigError, "--which expects supp or unif");
  const std::vector<std::size_t> grid = c.grid.empty() ? parse_grid("1..50") : c.grid;
  const std::size_t n = grid.size() * c.trials;
  auto outs = parallel_map<TrialOut>(n, jobs_of(c), [&](std::size_t i) {
    const std::size_t m = grid[i / c.trials];
    const std::size_t trial = i % c.trials;
    const std::uint64_t ds = data_seed(trial_seed(c, trial), m);
    if (which == "supp") {
      const ProblemInstance inst = mle_failure_supp(m, c.gamma);
      const Dataset data = sample_dataset(inst, m, ds);
      const Policy policy = mle_pis_adversarial(inst.model(), data, inst.truth_support());
      ResultRow row = base_row(c.experiment, inst, "mle_adversarial", m, trial, ds);
      lower(row, loss_exact(policy, inst.distribution, inst.truth_support()), 1 - c.gamma);
      return TrialOut{{row}, {}};
    }
    const ProblemInstance inst = mle_failure_unif(c.gamma);
    const Dataset data = sample_dataset(inst, m, ds);
    const MleReport report = mle_unif(inst.model(), data);
    const std::size_t s = static_cast<std::size_t>(ceil(1 / c.gamma));
    const Rational expected = 1 - Rational(1, static_cast<long>(s));
    ResultRow row = base_row(c.experiment, inst, "mle_unif", m, trial, ds);
    const bool unique_wrong = report.argmax_set.size() == 1 && report.argmax_set[0] != inst.truth;
    Rational loss = 0;
    if (!report.argmax_set.empty()) {
      loss = loss_exact(uniform_support_policy(inst.model().member(report.argmax_set[0]), inst.model().num_actions()),
                        inst.distribution, inst.truth_support());
    }
    lower(row, loss, expected);
    row.pass = row.pass && unique_wrong && loss == expected;
    return TrialOut{{row}, {}};
  });
  return collect(std::move(outs), false);
}

// Fraction of trials whose per-trial statistic crosses a threshold, checked
// against delta + 0.05; per-trial rows carry no bound of their own.
ResultRow fraction_row(const ExperimentConfig& c, const std::string& learner, std::size_t m,
                       std::size_t failures, std::size_t trials, std::uint64_t hash) {
  ResultRow row;
  row.experiment = c.experiment + "/fraction";
  row.instance_hash = hash;
  row.learner = learner;
  row.m_or_t = m;
  row.trial = trials;
  row.seed = c.seed;
  upper(row, Rational(static_cast<long>(failures), static_cast<long>(std::max<std::size_t>(trials, 1))),
        c.delta + Rational(1, 20));
  return row;
}

ExperimentResult run_mle_overlap_experiment(const ExperimentConfig& c) {
  const std::string which = c.which.empty() ? "overlap" : c.which;
  if (which != "overlap" && which != "positive") {
    throw Error(ErrorCode::kConfigError, "--which expects overlap or positive");
  }
  const double d = to_double(c.delta), eps = to_double(c.epsilon);
  struct Trial {
    ResultRow row;
    bool failed = false;
  };
  auto trials = parallel_map<Trial>(c.trials, jobs_of(c), [&](std::size_t trial) {
    const std::uint64_t ts = trial_seed(c, trial);
    const ProblemInstance inst = make_instance(c.instance, ts);
    const double s = static_cast<double>(inst.model().size());
    const std::size_t m = c.grid.empty()
                              ? static_cast<std::size_t>(std::ceil((std::log(s) + std::log(1 / d)) / eps))
                              : c.grid.front();
    const std::uint64_t ds = data_seed(ts, m);
    const Dataset data = sample_dataset(inst, m, ds);
    const MleReport report = mle_unif(inst.model(), data);
    const SupportFunction truth = inst.truth_support();
    Rational worst = 0;
    double threshold = 0.0;
    if (which == "overlap") {
      for (std::size_t h : report.argmax_set) worst = std::max(worst, disjoint_mass(inst.model(), h, inst.distribution, truth));
      threshold = eps;
    } else {
      for (std::size_t h : report.argmax_set) {
        const Policy p = uniform_support_policy(inst.model().member(h), inst.model().num_actions());
        worst = std::max(worst, loss_exact(p, inst.distribution, truth));
      }
      threshold = 6 * std::log(2 * s / d) / static_cast<double>(m);
    }
    Trial out;
    out.row = base_row(c.experiment, inst, "mle_unif", m, trial, ds);
    set_observed(out.row, worst);
    no_bound(out.row);
    out.failed = which == "overlap" ? worst > c.epsilon : out.row.observed > threshold;
    return out;
  });
  ExperimentResult result;
  std::size_t failures = 0;
  for (const auto& t : trials) {
    result.rows.push_back(t.row);
    failures += t.failed ? 1 : 0;
  }
  const std::size_t m = trials.empty() ? 0 : trials.front().row.m_or_t;
  result.rows.push_back(fraction_row(c, "mle_unif", m, failures, trials.size(), 0));
  result.extra["which"] = which;
  result.extra["failures"] = failures;
  return result;
}

// Suboptimal demonstrators with the (4/3, 2/3) learner: exact weight
// monotonicity (--which monotone), exact regret per hypothesis, and the
// square-root loss bound over trials.
ExperimentResult run_agnostic_experiment(const ExperimentConfig& c, const LearnerSpec& spec) {
  if (spec.kind != LearnerSpec::Kind::kWeighted) throw Error(ErrorCode::kConfigError, "agnostic runs need alg1");
  const std::vector<std::size_t> grid = c.grid.empty() ? std::vector<std::size_t>{200} : c.grid;
  const bool check_monotone = c.which == "monotone";
  const double d = to_double(c.delta);
  struct Trial {
    ResultRow row;
    bool exceeded = false;
    std::size_t monotone_failures = 0;
    bool regret_ok = true;
  };
  const std::size_t n = grid.size() * c.trials;
  auto trials = parallel_map<Trial>(n, jobs_of(c), [&](std::size_t i) {
    const std::size_t m = grid[i / c.trials];
    const std::size_t trial = i % c.trials;
    const std::uint64_t ts = trial_seed(c, trial);
    const ProblemInstance inst = make_instance(c.instance, ts);
    const SupportFunction truth = inst.truth_support();
    const std::uint64_t ds = data_seed(ts, m);
    const Dataset data = sample_dataset(inst, m, ds);
    WeightState state = WeightState::create(inst.cls, spec.params, WeightMode::kExact, spec.require_monotone);
    Trial out;
    Rational loss_sum = 0;
    Rational w_before = check_monotone ? total_weight(state) : Rational(0);
    for (const auto& z : data) {
      loss_sum += snapshot_loss(state, spec, inst, truth);
      update(state, z.x, predict(state, z.x).action, z.y);
      if (check_monotone) {
        Rational w_after = total_weight(state);
        if (w_after > w_before) ++out.monotone_failures;
        w_before = std::move(w_after);
      }
    }
    try {
      regret_check(MistakeLedger::from_state(state), spec.params);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBoundViolated) throw;
      out.regret_ok = false;
    }
    const Rational loss = loss_sum / static_cast<long>(m);
    const double s = static_cast<double>(inst.model().size());
    const Rational demo_loss = inst.demonstrator.losses.empty() ? Rational(0) : inst.demonstrator.losses[inst.truth];
    const double bound = 1.41 * to_double(demo_loss) + 10 * std::sqrt((std::log(s) + std::log(1 / d)) / m);
    out.row = base_row(c.experiment, inst, spec.label(), m, trial, ds);
    set_observed(out.row, loss);
    no_bound(out.row);
    out.row.pass = out.monotone_failures == 0 && out.regret_ok;
    out.exceeded = out.row.observed > bound;
    return out;
  });
  ExperimentResult result;
  std::size_t monotone = 0, regret = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::size_t exceeded = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
      const Trial& tr = trials[g * c.trials + t];
      result.rows.push_back(tr.row);
      exceeded += tr.exceeded ? 1 : 0;
      monotone += tr.monotone_failures;
      regret += tr.regret_ok ? 0 : 1;
    }
    result.rows.push_back(fraction_row(c, spec.label(), grid[g], exceeded, c.trials, 0));
  }
  result.extra["monotone_checked"] = check_monotone;
  result.extra["monotone_failures"] = monotone;
  result.extra["regret_failures"] = regret;
  return result;
}

// Scripted stream on the coordinate lower-bound instance: x_t = t, y_t = 1.
RunRecord majority_lb_run(std::size_t d, const LearnerSpec& spec) {
  const ProblemInstance inst = majority_lb(d);
  ScriptedSource src;
  for (std::size_t t = 0; t < inst.model().num_contexts(); ++t) {
    src.contexts.push_back(context(t));
    src.labels.push_back(action(1));
  }
  return run_online(inst, spec, src, RunOptions{false, false, false, false, false});
}

ExperimentResult run_lower_bounds_experiment(const ExperimentConfig& c) {
  const std::string which = c.which.empty() ? "all" : c.which;
  const bool all = which == "all";
  if (!all && which != "majority" && which != "ci" && which != "stat" && which != "passk") {
    throw Error(ErrorCode::kConfigError, "--which expects majority, ci, stat, passk or all");
  }
  ExperimentResult result;
  const std::vector<std::size_t> dims = c.grid.empty() || all ? std::vector<std::size_t>{3, 5, 9, 33, 101} : c.grid;
  if (all || which == "majority" || which == "ci") {
    for (std::size_t d : dims) {
      const ProblemInstance inst = majority_lb(d);
      const std::size_t q = (d - 1) / 2;
      if (all || which == "majority") {
        const RunRecord rec = majority_lb_run(d, LearnerSpec::majority());
        ResultRow row = base_row(c.experiment + "/majority", inst, rec.learner, d, 0, 0);
        lower(row, Rational(rec.summary.mistakes), Rational(static_cast<long>(q)));
        row.pass = row.pass && rec.summary.mistakes == q;
        result.rows.push_back(std::move(row));
      }
      if (all || which == "ci") {
        const RunRecord rec = majority_lb_run(d, LearnerSpec::common_intersection());
        ResultRow row = base_row(c.experiment + "/ci", inst, rec.learner, d, 0, 0);
        upper(row, Rational(rec.summary.mistakes), Rational(static_cast<long>(inst.model().size() - 1)));
        result.rows.push_back(std::move(row));
      }
    }
  }
  if (all || which == "stat") {
    const ProblemInstance inst = majority_lb(33);
    const SupportFunction truth = inst.truth_support();
    const std::vector<std::size_t> ms = c.grid.empty() || all ? parse_grid("1..8") : c.grid;
    const std::size_t n = ms.size() * c.trials;
    auto outs = parallel_map<TrialOut>(n, jobs_of(c), [&](std::size_t i) {
      const std::size_t m = ms[i / c.trials];
      const std::size_t trial = i % c.trials;
      const std::uint64_t ds = data_seed(trial_seed(c, trial), m);
      const Dataset data = sample_dataset(inst, m, ds);
      std::vector<ActionId> maj, ci;
      for (std::size_t x = 0; x < inst.model().num_contexts(); ++x) {
        maj.push_back(majority_predict(inst.model(), data, context(x)));
        ci.push_back(common_intersection_predict(inst.model(), data, context(x)).action);
      }
      const std::size_t ny = inst.model().num_actions();
      ResultRow a = base_row(c.experiment + "/stat", inst, "majority", m, trial, ds);
      lower(a, loss_exact(deterministic_policy(ny, maj), inst.distribution, truth), Rational(1, 2));
      ResultRow b = base_row(c.experiment + "/stat", inst, "common_intersection", m, trial, ds);
      lower(b, loss_exact(deterministic_policy(ny, ci), inst.distribution, truth), Rational(1, 2));
      return TrialOut{{a, b}, {}};
    });
    for (auto& r : collect(std::move(outs), false).rows) result.rows.push_back(std::move(r));
  }
  if (all || which == "passk") {
    const std::vector<std::size_t> ks = all ? std::vector<std::size_t>{1, 2, 3, 5} : std::vector<std::size_t>{c.k};
    const std::vector<std::size_t> ds = c.grid.empty() || all ? std::vector<std::size_t>{10, 100, 1000} : c.grid;
    for (std::size_t k : ks) {
      for (std::size_t d : ds) {
        const ProblemInstance inst = passk_lb_online(k, d);
        const std::size_t rounds = inst.model().num_contexts();
        RunOptions opts{false, cross_checkable(inst.model()), false, true, false};
        RunRecord rec = run_online(inst, LearnerSpec::passk(k), AdversarialSource{std::make_shared<RevealingAdversary>(rounds)}, opts);
        ResultRow row = base_row(c.experiment + "/passk", inst, rec.learner, d, 0, 0);
        lower(row, Rational(rec.summary.mistakes), Rational(static_cast<long>(floor_log(d, k + 1))));
        row.pass = row.pass && rec.summary.mistakes == floor_log(d, k + 1) &&
                   rec.summary.key_inequality_failures == 0 && rec.summary.mode_disagreements == 0;
        result.rows.push_back(std::move(row));
        if (c.transcripts) result.transcripts.push_back(std::move(rec));
      }
    }
  }
  result.extra["which"] = which;
  return result;
}

ExperimentResult run_cloning_experiment(const ExperimentConfig& c) {
  const std::vector<std::size_t> grid = c.grid.empty() ? std::vector<std::size_t>{2} : c.grid;
  ExperimentResult result;
  Json table = Json::array();
  for (std::size_t m : grid) {
    const ProblemInstance inst = cloning_impossible(m);
    for (const CloningRow& r : cloning_report(m)) {
      ResultRow row = base_row(c.experiment, inst, r.estimator, m, 0, 0);
      const bool constant = r.estimator.rfind("constant", 0) == 0;
      if (constant) {
        lower(row, r.mean_tv, Rational(1, 4));
      } else {
        set_observed(row, r.mean_tv);
        no_bound(row);
      }
      row.pass = row.pass && r.loss == 0;
      result.rows.push_back(std::move(row));
      table.push_back({{"m", m}, {"estimator", r.estimator}, {"mean_tv", to_string(r.mean_tv)},
                       {"mean_hellinger2", fmt(r.mean_hellinger2)}, {"loss", to_string(r.loss)}});
    }
  }
  result.extra["report"] = std::move(table);
  return result;
}

ExperimentResult run_validate_experiment(const ExperimentConfig& c) {
  ExperimentResult result;
  ProblemInstance inst = make_instance(c.instance, c.seed);
  const ValidationResult v = validate_instance(inst);
  ResultRow row = base_row(c.experiment, inst, "", 0, 0, c.seed);
  set_observed(row, Rational(v.ok ? 1 : 0));
  no_bound(row);
  row.pass = v.ok;
  result.rows.push_back(row);
  result.extra["valid"] = v.ok;
  if (!v.ok) result.extra["error"] = v.message;
  result.extra["instance_hash"] = hex(inst.hash());
  result.extra["hypotheses"] = inst.model().size();
  result.extra["contexts"] = inst.model().num_contexts();
  result.extra["actions"] = inst.model().num_actions();
  result.extra["provenance"] = inst.provenance;
  return result;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Json ExperimentConfig::to_json() const {
  Json doc;
  doc["experiment"] = experiment;
  doc["instance"] = instance;
  doc["learner"] = learner;
  doc["grid"] = grid;
  doc["trials"] = trials;
  doc["seed"] = seed;
  doc["delta"] = to_string(delta);
  doc["epsilon"] = to_string(epsilon);
  doc["gamma"] = to_string(gamma);
  doc["k"] = k;
  doc["budget"] = budget;
  doc["which"] = which;
  doc["output_dir"] = output_dir.string();
  doc["jobs"] = jobs;
  doc["transcripts"] = transcripts;
  doc["svg"] = svg;
  return doc;
}

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "experiment") c.experiment = v.get<std::string>();
      else if (key == "instance") c.instance = v.get<std::string>();
      else if (key == "learner") c.learner = v.get<std::string>();
      else if (key == "grid") c.grid = v.is_string() ? parse_grid(v.get<std::string>()) : v.get<std::vector<std::size_t>>();
      else if (key == "trials") c.trials = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "delta") c.delta = rational_from_json(v);
      else if (key == "epsilon") c.epsilon = rational_from_json(v);
      else if (key == "gamma") c.gamma = rational_from_json(v);
      else if (key == "k") c.k = v.get<std::size_t>();
      else if (key == "budget") c.budget = v.get<std::size_t>();
      else if (key == "which") c.which = v.get<std::string>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "jobs") c.jobs = v.get<std::size_t>();
      else if (key == "transcripts") c.transcripts = v.get<bool>();
      else if (key == "svg") c.svg = v.get<bool>();
      else throw Error(ErrorCode::kConfigError, "unknown config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, e.what());
  }
  return c;
}

bool ExperimentResult::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.pass; });
}

double ExperimentResult::worst_slack() const {
  double worst = kInf;
  for (const auto& r : rows) {
    if (!r.bound.empty()) worst = std::min(worst, r.slack);
  }
  return worst;
}

std::vector<std::size_t> parse_grid(std::string_view text) {
  std::vector<std::size_t> out;
  bool geometric = false;
  if (text.substr(0, 5) == "geom:") {
    geometric = true;
    text.remove_prefix(5);
  }
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const std::size_t lo = parse_count(text.substr(0, dots));
    const std::size_t hi = parse_count(text.substr(dots + 2));
    if (lo > hi || (geometric && lo == 0)) throw Error(ErrorCode::kConfigError, "empty grid range '" + std::string(text) + "'");
    for (std::size_t v = lo; v <= hi; v = geometric ? v * 2 : v + 1) out.push_back(v);
  } else {
    if (geometric) throw Error(ErrorCode::kConfigError, "geom: expects a range");
    for (const auto& part : split(text, ',')) out.push_back(parse_count(part));
  }
  return out;
}

ProblemInstance make_instance(std::string_view text, std::uint64_t fallback_seed) {
  const Spec s = parse_spec(text);
  if (s.name == "random") {
    s.only({"S", "X", "Y", "density", "seed", "dist", "demo", "off"});
    RandomInstanceOptions o;
    o.num_hypotheses = s.size("S", 16);
    o.num_contexts = s.size("X", 4);
    o.num_actions = s.size("Y", 4);
    o.density = s.rational("density", Rational(1, 2));
    o.seed = s.has("seed") ? s.size("seed", 0) : fallback_seed;
    const std::string dist = s.get("dist", "uniform");
    if (dist != "uniform" && dist != "random") throw Error(ErrorCode::kConfigError, "dist expects uniform or random");
    o.random_distribution = dist == "random";
    const std::string demo = s.get("demo", "min");
    if (demo == "min") o.demonstrator = DemonstratorSpec::Kind::kDeterministicMin;
    else if (demo == "max") o.demonstrator = DemonstratorSpec::Kind::kDeterministicMax;
    else if (demo == "uniform") o.demonstrator = DemonstratorSpec::Kind::kUniformSupport;
    else if (demo == "suboptimal") o.demonstrator = DemonstratorSpec::Kind::kSuboptimal;
    else throw Error(ErrorCode::kConfigError, "demo expects min, max, uniform or suboptimal");
    o.off_mass = s.rational("off", Rational(1, 4));
    return random_instance(o);
  }
  if (s.name == "majority_lb") {
    s.only({"d"});
    return majority_lb(s.size("d", 33));
  }
  if (s.name == "mle_failure_supp") {
    s.only({"m", "gamma"});
    return mle_failure_supp(s.size("m", 4), s.rational("gamma", Rational(1, 2)));
  }
  if (s.name == "mle_failure_unif") {
    s.only({"gamma"});
    return mle_failure_unif(s.rational("gamma", Rational(1, 2)));
  }
  if (s.name == "passk_lb_online") {
    s.only({"k", "d"});
    return passk_lb_online(s.size("k", 2), s.size("d", 27));
  }
  if (s.name == "passk_lb_stat") {
    s.only({"k", "q"});
    return passk_lb_stat(s.size("k", 2), s.size("q", 2));
  }
  if (s.name == "cloning") {
    s.only({"m"});
    return cloning_impossible(s.size("m", 2));
  }
  if (s.name == "file") return instance_from_json(read_json_file(s.get("path", "")));
  throw Error(ErrorCode::kConfigError, "unknown instance generator '" + s.name + "'");
}

LearnerSpec parse_learner(std::string_view text) {
  const Spec s = parse_spec(text);
  LearnerSpec spec;
  if (s.name == "alg1") {
    s.only({"alpha", "beta", "mode", "realizable", "agnostic", "majority", "monotone"});
    Hyperparams base = Hyperparams::realizable();
    if (s.has("agnostic")) base = Hyperparams::agnostic();
    if (s.has("majority")) base = Hyperparams::majority();
    spec = LearnerSpec::weighted(base);
    spec.params.alpha = s.rational("alpha", base.alpha);
    spec.params.beta = s.rational("beta", base.beta);
    spec.require_monotone = s.has("monotone");
  } else if (s.name == "passk") {
    s.only({"k", "mode"});
    spec = LearnerSpec::passk(s.size("k", 2));
  } else if (s.name == "majority") {
    s.only({});
    return LearnerSpec::majority();
  } else if (s.name == "ci") {
    s.only({});
    return LearnerSpec::common_intersection();
  } else {
    throw Error(ErrorCode::kConfigError, "unknown learner '" + s.name + "'");
  }
  const std::string mode = s.get("mode", "exact");
  if (mode == "float") spec.mode = WeightMode::kLogFloat;
  else if (mode != "exact") throw Error(ErrorCode::kConfigError, "mode expects exact or float");
  return spec;
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("ANSWERLEARN_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  if (c.trials == 0) throw Error(ErrorCode::kConfigError, "trials must be positive");
  const std::string& e = c.experiment;
  if (e == "run-online") return run_online_experiment(c, parse_learner(c.learner));
  if (e == "run-passk") {
    LearnerSpec spec = c.learner.rfind("passk", 0) == 0 ? parse_learner(c.learner) : LearnerSpec::passk(c.k);
    return run_online_experiment(c, spec);
  }
  if (e == "run-batch") {
    if (c.which == "reward") return run_reward_experiment(c, parse_learner(c.learner));
    return run_batch_experiment(c, parse_learner(c.learner));
  }
  if (e == "run-mle-failure") return run_mle_failure_experiment(c);
  if (e == "run-mle-overlap") return run_mle_overlap_experiment(c);
  if (e == "run-agnostic") return run_agnostic_experiment(c, parse_learner(c.learner));
  if (e == "run-lower-bounds") return run_lower_bounds_experiment(c);
  if (e == "run-cloning-report") return run_cloning_experiment(c);
  if (e == "validate-instance") return run_validate_experiment(c);
  if (e == "sweep") {
    // One sub-experiment (--which, default run-online) per ';'-separated instance.
    ExperimentConfig sub = c;
    sub.experiment = c.which.empty() ? "run-online" : c.which;
    sub.which.clear();
    if (sub.experiment == "sweep") throw Error(ErrorCode::kConfigError, "sweep cannot nest");
    ExperimentResult result;
    Json parts = Json::array();
    for (const auto& inst : split(c.instance, ';')) {
      sub.instance = inst;
      ExperimentResult part = run_experiment(sub);
      parts.push_back({{"instance", inst}, {"pass", part.pass()}, {"rows", part.rows.size()}});
      for (auto& r : part.rows) result.rows.push_back(std::move(r));
      for (auto& t : part.transcripts) result.transcripts.push_back(std::move(t));
    }
    result.extra["parts"] = std::move(parts);
    return result;
  }
  throw Error(ErrorCode::kConfigError, "unknown experiment '" + e + "'");
}

std::string results_csv(std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.instance_hash, a.learner, a.m_or_t, a.trial, a.seed) <
           std::tie(b.experiment, b.instance_hash, b.learner, b.m_or_t, b.trial, b.seed);
  });
  std::ostringstream out;
  out << "experiment,instance_hash,learner,m_or_T,trial,seed,observed_exact,observed_float,bound,slack,pass\n";
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << hex(r.instance_hash) << ',' << csv_field(r.learner) << ','
        << r.m_or_t << ',' << r.trial << ',' << r.seed << ',' << r.observed_exact << ',' << fmt(r.observed) << ','
        << r.bound << ',' << (r.bound.empty() ? "" : fmt(r.slack)) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

Json summary_json(const std::string& experiment, const ExperimentResult& result) {
  Json doc;
  doc["experiment"] = experiment;
  doc["pass"] = result.pass();
  doc["rows"] = result.rows.size();
  doc["worst_slack"] = fmt(result.worst_slack());
  if (!result.extra.empty()) doc["details"] = result.extra;
  return doc;
}

std::vector<Curve> aggregate_curves(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::uint64_t>;
  std::map<Key, std::map<std::size_t, std::vector<const ResultRow*>>> groups;
  for (const auto& r : rows) groups[{r.learner, r.instance_hash}][r.m_or_t].push_back(&r);
  std::vector<Curve> curves;
  for (const auto& [key, by_x] : groups) {
    Curve curve;
    curve.learner = std::get<0>(key);
    curve.instance_hash = std::get<1>(key);
    for (const auto& [x, group] : by_x) {
      std::vector<double> xs;
      double bound = kInf;
      for (const ResultRow* r : group) {
        xs.push_back(r->observed);
        if (!r->bound.empty()) bound = std::min(bound, r->bound_value);
      }
      CurvePoint p;
      p.x = x;
      p.n = xs.size();
      p.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
      const double hw = half_width(xs);
      p.ci_low = p.mean - hw;
      p.ci_high = p.mean + hw;
      p.bound = bound;
      curve.points.push_back(p);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::string curves_csv(const std::vector<Curve>& curves) {
  std::ostringstream out;
  out << "learner,instance_hash,x,n,mean,ci_low,ci_high,bound\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << csv_field(c.learner) << ',' << hex(c.instance_hash) << ',' << p.x << ',' << p.n << ',' << fmt(p.mean)
          << ',' << fmt(p.ci_low) << ',' << fmt(p.ci_high) << ',' << (std::isinf(p.bound) ? "" : fmt(p.bound)) << '\n';
    }
  }
  return out.str();
}

Json curves_json(const std::vector<Curve>& curves) {
  Json out = Json::array();
  for (const auto& c : curves) {
    Json pts = Json::array();
    for (const auto& p : c.points) {
      Json pt = {{"x", p.x}, {"n", p.n}, {"mean", p.mean}, {"ci_low", p.ci_low}, {"ci_high", p.ci_high}};
      pt["bound"] = std::isinf(p.bound) ? Json(nullptr) : Json(p.bound);
      pts.push_back(std::move(pt));
    }
    out.push_back({{"learner", c.learner}, {"instance_hash", hex(c.instance_hash)}, {"points", std::move(pts)}});
  }
  return out;
}

std::string curves_svg(const std::vector<Curve>& curves, const std::string& title) {
  constexpr double kW = 640, kH = 400, kPad = 50;
  double max_x = 1, max_y = 1e-9;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      max_x = std::max(max_x, static_cast<double>(p.x));
      max_y = std::max(max_y, p.ci_high);
      if (!std::isinf(p.bound)) max_y = std::max(max_y, std::min(p.bound, 4 * max_y));
    }
  }
  auto px = [&](double x) { return kPad + (kW - 2 * kPad) * x / max_x; };
  auto py = [&](double y) { return kH - kPad - (kH - 2 * kPad) * std::min(y, max_y) / max_y; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad << "\" y2=\"" << kH - kPad
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\"" << kH - kPad
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kW - kPad << "\" y=\"" << kH - kPad + 20 << "\" font-size=\"11\" text-anchor=\"end\">"
      << fmt(max_x) << "</text>\n"
      << "<text x=\"" << kPad - 4 << "\" y=\"" << kPad << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(max_y)
      << "</text>\n";
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::size_t i = 0;
  for (const auto& c : curves) {
    const char* color = kColors[i++ % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& p : c.points) out << px(static_cast<double>(p.x)) << ',' << py(p.mean) << ' ';
    out << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\" points=\"";
    for (const auto& p : c.points) {
      if (!std::isinf(p.bound)) out << px(static_cast<double>(p.x)) << ',' << py(p.bound) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

int write_artifacts(const ExperimentConfig& config, ExperimentResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + p.string());
    out << text;
  };
  write(config.output_dir / "results.csv", results_csv(result.rows));
  write_json_file(config.output_dir / "summary.json", summary_json(config.experiment, result));
  write_json_file(config.output_dir / "config.json", config.to_json());
  const auto curves = aggregate_curves(result.rows);
  write(config.output_dir / "curves.csv", curves_csv(curves));
  write_json_file(config.output_dir / "curves.json", curves_json(curves));
  if (config.svg) write(config.output_dir / "curves.svg", curves_svg(curves, config.experiment));
  if (config.transcripts && !result.transcripts.empty()) {
    const fs::path dir = config.output_dir / "transcripts";
    fs::create_directories(dir);
    for (std::size_t i = 0; i < result.transcripts.size(); ++i) {
      std::ofstream out(dir / ("run_" + std::to_string(i) + ".jsonl"));
      write_transcript(out, result.transcripts[i]);
    }
  }
  return result.pass() ? 0 : 1;
}

}  // namespace answerlearn
