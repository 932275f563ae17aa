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

#include "answerlearn/sim.hpp"

#include <algorithm>
#include <string>

#include "answerlearn/passk.hpp"

namespace answerlearn {
namespace {

// Per-context label sampler for a non-adaptive demonstrator.
class DemonstratorSampler {
 public:
  explicit DemonstratorSampler(const ProblemInstance& instance) : instance_(&instance) {
    using Kind = DemonstratorSpec::Kind;
    const auto& spec = instance.demonstrator;
    if (spec.kind == Kind::kAdaptive) {
      throw Error(ErrorCode::kAdaptiveNotSamplable, "adaptive demonstrators need the online driver");
    }
    if (spec.kind == Kind::kTable || spec.kind == Kind::kSuboptimal) {
      for (const auto& row : spec.table) rows_.emplace_back(row);
    }
  }

  ActionId operator()(ContextId x, SplitMix64& rng) const {
    using Kind = DemonstratorSpec::Kind;
    const ActionSetView s = instance_->cls->support(instance_->truth, x);
    switch (instance_->demonstrator.kind) {
      case Kind::kDeterministicMin: return *s.min();
      case Kind::kDeterministicMax: return *s.max();
      case Kind::kUniformSupport: {
        const std::uint64_t pick = rng.uniform_below(s.count());
        std::uint64_t i = 0;
        ActionId out{};
        s.for_each([&](ActionId y) {
          if (i++ == pick) out = y;
        });
        return out;
      }
      case Kind::kTable:
      case Kind::kSuboptimal: return action(rows_.at(index(x)).sample(rng));
      case Kind::kAdaptive: break;
    }
    throw Error(ErrorCode::kAdaptiveNotSamplable, "adaptive demonstrators need the online driver");
  }

 private:
  const ProblemInstance* instance_;
  std::vector<DiscreteSampler> rows_;
};

class WeightedLearner : public OnlineLearner {
 public:
  WeightedLearner(const LearnerSpec& spec, std::shared_ptr<const ModelClass> cls)
      : state_(WeightState::create(std::move(cls), spec.params, spec.mode, spec.require_monotone)) {}

  LearnerOutput predict(ContextId x) override {
    const Prediction p = answerlearn::predict(state_, x);
    LearnerOutput out;
    out.actions = {p.action};
    out.degenerate = p.degenerate;
    return out;
  }
  void observe(ContextId x, const LearnerOutput& output, ActionId y) override {
    update(state_, x, output.actions.front(), y);
  }
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<WeightedLearner>(*this); }
  const WeightState* weights() const override { return &state_; }

 private:
  WeightState state_;
};

class PassKLearner : public OnlineLearner {
 public:
  PassKLearner(const LearnerSpec& spec, std::shared_ptr<const ModelClass> cls)
      : state_(WeightState::create_boost(std::move(cls), spec.k, spec.mode)), k_(spec.k) {}

  LearnerOutput predict(ContextId x) override {
    KSelection sel = predict_k(state_, x, k_, record_marginals_);
    LearnerOutput out;
    out.actions = std::move(sel.actions);
    out.degenerate = sel.degenerate;
    out.marginals = std::move(sel.marginals);
    out.covered = std::move(sel.covered);
    return out;
  }
  void observe(ContextId x, const LearnerOutput& output, ActionId y) override {
    KSelection sel;
    sel.actions = output.actions;
    sel.covered = output.covered;
    update_k(state_, x, sel, y);
  }
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<PassKLearner>(*this); }
  const WeightState* weights() const override { return &state_; }
  void set_record_marginals(bool on) { record_marginals_ = on; }

 private:
  WeightState state_;
  std::size_t k_;
  bool record_marginals_ = true;
};

class VersionSpaceLearner : public OnlineLearner {
 public:
  VersionSpaceLearner(bool intersection, std::shared_ptr<const ModelClass> cls)
      : cls_(std::move(cls)), space_(*cls_), intersection_(intersection) {}

  LearnerOutput predict(ContextId x) override {
    LearnerOutput out;
    if (intersection_) {
      const CiPrediction p = common_intersection_predict(*cls_, space_, x);
      out.actions = {p.action};
      out.degenerate = p.non_realizable;
    } else {
      out.actions = {majority_predict(*cls_, space_, x)};
      out.degenerate = space_.alive_count() == 0;
    }
    return out;
  }
  void observe(ContextId x, const LearnerOutput&, ActionId y) override { space_.observe(x, y); }
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<VersionSpaceLearner>(*this); }

 private:
  std::shared_ptr<const ModelClass> cls_;
  VersionSpace space_;
  bool intersection_;
};

bool hits(const ModelClass& cls, std::size_t truth, ContextId x, const std::vector<ActionId>& actions) {
  return std::any_of(actions.begin(), actions.end(), [&](ActionId y) { return cls.contains(truth, x, y); });
}

WeightMode other(WeightMode mode) {
  return mode == WeightMode::kExact ? WeightMode::kLogFloat : WeightMode::kExact;
}

std::vector<std::string> marginal_strings(const std::vector<Rational>& marginals) {
  std::vector<std::string> out;
  out.reserve(marginals.size());
  for (const auto& m : marginals) out.push_back(to_string(m));
  return out;
}

}  // namespace

Dataset sample_dataset(const ProblemInstance& instance, std::size_t m, std::uint64_t seed) {
  const DemonstratorSampler demo(instance);
  SplitMix64 rng(seed);
  Dataset data;
  data.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const ContextId x = instance.distribution.sample(rng);
    data.push_back({x, demo(x, rng)});
  }
  return data;
}

ActionId demonstrate(const ProblemInstance& instance, ContextId x, SplitMix64& rng) {
  return DemonstratorSampler(instance)(x, rng);
}

LearnerSpec LearnerSpec::weighted(const Hyperparams& params) {
  LearnerSpec s;
  s.params = params;
  return s;
}

LearnerSpec LearnerSpec::passk(std::size_t k) {
  LearnerSpec s;
  s.kind = Kind::kPassK;
  s.k = k;
  return s;
}

LearnerSpec LearnerSpec::majority() {
  LearnerSpec s;
  s.kind = Kind::kMajority;
  return s;
}

LearnerSpec LearnerSpec::common_intersection() {
  LearnerSpec s;
  s.kind = Kind::kCommonIntersection;
  return s;
}

std::string LearnerSpec::label() const {
  switch (kind) {
    case Kind::kWeighted:
      return "weighted(alpha=" + to_string(params.alpha) + ",beta=" + to_string(params.beta) + ")";
    case Kind::kPassK: return "passk(k=" + std::to_string(k) + ")";
    case Kind::kMajority: return "majority";
    case Kind::kCommonIntersection: return "common_intersection";
  }
  return "unknown";
}

std::optional<std::uint64_t> mistake_bound(const LearnerSpec& spec, std::size_t class_size) {
  switch (spec.kind) {
    case LearnerSpec::Kind::kWeighted: return realizable_mistake_bound(spec.params, class_size);
    case LearnerSpec::Kind::kPassK: return floor_log(class_size, spec.k + 1);
    case LearnerSpec::Kind::kMajority:
    case LearnerSpec::Kind::kCommonIntersection: return class_size - 1;
  }
  return std::nullopt;
}

std::unique_ptr<OnlineLearner> make_learner(const LearnerSpec& spec, std::shared_ptr<const ModelClass> cls) {
  switch (spec.kind) {
    case LearnerSpec::Kind::kWeighted: return std::make_unique<WeightedLearner>(spec, std::move(cls));
    case LearnerSpec::Kind::kPassK: return std::make_unique<PassKLearner>(spec, std::move(cls));
    case LearnerSpec::Kind::kMajority: return std::make_unique<VersionSpaceLearner>(false, std::move(cls));
    case LearnerSpec::Kind::kCommonIntersection:
      return std::make_unique<VersionSpaceLearner>(true, std::move(cls));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown learner kind");
}

ContextId RevealingAdversary::next_context(std::size_t t, std::span<const Demonstration>) { return context(t); }

ActionId RevealingAdversary::reveal(std::size_t, ContextId, std::span<const ActionId> prediction,
                                    std::span<const Demonstration>) {
  std::size_t y = 0;
  while (std::find(prediction.begin(), prediction.end(), action(y)) != prediction.end()) ++y;
  return action(y);
}

std::size_t RevealingAdversary::resolve_truth(const ModelClass& cls, std::span<const Demonstration> history) {
  std::vector<ActionId> labels(cls.num_contexts(), action(0));
  for (const auto& d : history) labels[index(d.x)] = d.y;
  const std::size_t h = product_index(labels, cls.num_actions());
  if (h >= cls.size()) throw Error(ErrorCode::kInvalidArgument, "revealing adversary needs a product class");
  return h;
}

ScriptedSource ScriptedSource::from_dataset(const Dataset& data) {
  ScriptedSource s;
  for (const auto& d : data) {
    s.contexts.push_back(d.x);
    s.labels.push_back(d.y);
  }
  return s;
}

Dataset RunRecord::dataset() const {
  Dataset data;
  data.reserve(rounds.size());
  for (const auto& r : rounds) data.push_back({r.x, r.y});
  return data;
}

RunRecord run_online(const ProblemInstance& instance, const LearnerSpec& spec, const SequenceSource& source,
                     const RunOptions& options) {
  using Kind = DemonstratorSpec::Kind;
  const ModelClass& cls = *instance.cls;
  const bool adaptive = instance.demonstrator.kind == Kind::kAdaptive;
  const bool suboptimal = instance.demonstrator.kind == Kind::kSuboptimal;
  std::optional<DemonstratorSampler> demo;
  if (!adaptive) demo.emplace(instance);

  auto learner = make_learner(spec, instance.cls);
  if (auto* pk = dynamic_cast<PassKLearner*>(learner.get())) pk->set_record_marginals(options.record_marginals);

  RunRecord rec;
  rec.learner = spec.label();
  rec.instance_hash = instance.hash();
  rec.truth = instance.truth;

  const auto* sampled = std::get_if<SampledSource>(&source);
  const auto* scripted = std::get_if<ScriptedSource>(&source);
  const auto* adversarial = std::get_if<AdversarialSource>(&source);
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
  if (sampled) {
    rounds = sampled->rounds;
    seed = sampled->seed;
  } else if (scripted) {
    rounds = scripted->contexts.size();
    seed = scripted->seed;
    if (!scripted->labels.empty() && scripted->labels.size() != rounds) {
      throw Error(ErrorCode::kDimensionMismatch, "scripted labels and contexts differ in length");
    }
  } else {
    if (!adversarial->adversary) throw Error(ErrorCode::kInvalidArgument, "null adversary");
    rounds = adversarial->adversary->rounds();
  }
  rec.seed = seed;
  SplitMix64 rng(seed);

  Dataset history;
  history.reserve(rounds);
  rec.rounds.reserve(rounds);
  std::optional<Rational> weight_now;
  const bool need_weight = options.record_total_weight || options.check_monotone;

  for (std::size_t t = 0; t < rounds; ++t) {
    ContextId x{};
    if (sampled) {
      x = instance.distribution.sample(rng);
    } else if (scripted) {
      x = scripted->contexts[t];
    } else {
      x = adversarial->adversary->next_context(t, history);
    }
    if (index(x) >= cls.num_contexts()) throw Error(ErrorCode::kIndexOutOfRange, "context out of range");

    RoundRecord round;
    round.t = t;
    round.x = x;
    const WeightState* ws = learner->weights();
    if (ws && need_weight) {
      if (!weight_now) weight_now = total_weight(*ws);
      if (options.record_total_weight) round.total_weight = to_string(*weight_now);
    }

    LearnerOutput out = learner->predict(x);
    round.y_hat = out.actions;
    round.degenerate = out.degenerate;
    round.marginals = marginal_strings(out.marginals);
    if (out.degenerate) ++rec.summary.degenerate_rounds;

    if (options.cross_check_modes && ws) {
      if (spec.kind == LearnerSpec::Kind::kPassK) {
        if (predict_k(*ws, x, spec.k, other(ws->mode()), false).actions != out.actions) {
          ++rec.summary.mode_disagreements;
        }
      } else if (predict(*ws, x, other(ws->mode())).action != out.actions.front()) {
        ++rec.summary.mode_disagreements;
      }
    }

    ActionId y{};
    if (adversarial) {
      y = adversarial->adversary->reveal(t, x, out.actions, history);
    } else if (scripted && !scripted->labels.empty()) {
      y = scripted->labels[t];
    } else if (adaptive) {
      AdaptiveView view;
      view.t = t;
      view.x = x;
      view.prediction = out.actions;
      view.history = history;
      view.cls = &cls;
      view.truth = instance.truth;
      y = instance.demonstrator.adaptive(view);
    } else {
      y = (*demo)(x, rng);
    }
    if (index(y) >= cls.num_actions()) throw Error(ErrorCode::kIndexOutOfRange, "label out of range");
    if (!adversarial && !suboptimal && !cls.contains(instance.truth, x, y)) {
      throw Error(ErrorCode::kDemonstratorViolation,
                  "label " + std::to_string(index(y)) + " outside the truth at context " + std::to_string(index(x)) +
                      " in round " + std::to_string(t));
    }
    round.y = y;

    if (options.check_key_inequality && ws && spec.kind == LearnerSpec::Kind::kPassK) {
      KSelection sel;
      sel.actions = out.actions;
      sel.covered = out.covered;
      if (!key_inequality(*ws, x, sel, y).holds) ++rec.summary.key_inequality_failures;
    }

    learner->observe(x, out, y);
    history.push_back({x, y});

    if (ws && need_weight) {
      Rational next = total_weight(*learner->weights());
      if (options.check_monotone && next > *weight_now) ++rec.summary.monotone_failures;
      weight_now = std::move(next);
    }
    rec.rounds.push_back(std::move(round));
  }

  if (adversarial) {
    rec.truth = adversarial->adversary->resolve_truth(cls, history);
    for (const auto& d : history) {
      if (!cls.contains(rec.truth, d.x, d.y)) {
        throw Error(ErrorCode::kDemonstratorViolation, "adversary's labels contradict its resolved truth");
      }
    }
  }

  RunSummary& sum = rec.summary;
  sum.rounds = rec.rounds.size();
  sum.realizable = true;
  for (auto& r : rec.rounds) {
    r.mistake = !hits(cls, rec.truth, r.x, r.y_hat);
    if (r.mistake) ++sum.mistakes;
    if (!cls.contains(rec.truth, r.x, r.y)) sum.realizable = false;
  }
  if (sum.realizable) {
    sum.bound = mistake_bound(spec, cls.size());
    sum.within_bound = !sum.bound || sum.mistakes <= *sum.bound;
  }
  return rec;
}

RunRecord adversarial_search(const ProblemInstance& instance, const LearnerSpec& spec, std::size_t rounds,
                             std::size_t budget, std::uint64_t seed, const RunOptions& options) {
  const ModelClass& cls = *instance.cls;
  const std::size_t nx = cls.num_contexts();
  const std::size_t truth = instance.truth;

  ScriptedSource baseline;
  for (std::size_t t = 0; t < rounds; ++t) {
    const ContextId x = context(t % nx);
    baseline.contexts.push_back(x);
    baseline.labels.push_back(*cls.support(truth, x).min());
  }
  RunRecord best = run_online(instance, spec, baseline, options);
  best.seed = seed;
  if (budget == 0) return best;

  SplitMix64 rng(seed);
  std::size_t spent = 0;
  auto erring_contexts = [&](OnlineLearner& learner, std::vector<LearnerOutput>* outputs) {
    std::size_t count = 0;
    for (std::size_t c = 0; c < nx; ++c) {
      LearnerOutput out = learner.predict(context(c));
      if (!hits(cls, truth, context(c), out.actions)) ++count;
      if (outputs) outputs->push_back(std::move(out));
    }
    spent += nx;
    return count;
  };

  while (spent < budget) {
    auto learner = make_learner(spec, instance.cls);
    if (auto* pk = dynamic_cast<PassKLearner*>(learner.get())) pk->set_record_marginals(false);
    ScriptedSource script;
    script.seed = seed;
    for (std::size_t t = 0; t < rounds; ++t) {
      std::vector<LearnerOutput> outputs;
      erring_contexts(*learner, &outputs);
      std::vector<std::size_t> erring;
      for (std::size_t c = 0; c < nx; ++c) {
        if (!hits(cls, truth, context(c), outputs[c].actions)) erring.push_back(c);
      }
      std::size_t x = 0;
      if (!erring.empty() && rng.uniform_below(10) != 0) {
        x = erring[rng.uniform_below(erring.size())];
      } else {
        x = rng.uniform_below(nx);
      }
      const auto labels = cls.support(truth, context(x)).to_vector();
      ActionId y = labels[rng.uniform_below(labels.size())];
      if (labels.size() > 1 && spent < budget && rng.uniform_below(4) != 0) {
        // One-step lookahead: the label leaving the most contexts in error.
        std::size_t best_count = 0;
        std::vector<ActionId> best_labels;
        for (ActionId candidate : labels) {
          auto trial = learner->clone();
          trial->observe(context(x), outputs[x], candidate);
          const std::size_t count = erring_contexts(*trial, nullptr);
          if (best_labels.empty() || count > best_count) {
            best_count = count;
            best_labels = {candidate};
          } else if (count == best_count) {
            best_labels.push_back(candidate);
          }
        }
        y = best_labels[rng.uniform_below(best_labels.size())];
      }
      learner->observe(context(x), outputs[x], y);
      script.contexts.push_back(context(x));
      script.labels.push_back(y);
    }
    RunRecord run = run_online(instance, spec, script, options);
    run.seed = seed;
    if (run.summary.mistakes > best.summary.mistakes) best = std::move(run);
  }
  return best;
}

}  // namespace answerlearn
