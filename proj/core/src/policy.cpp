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

#include "answerlearn/policy.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <boost/math/distributions/beta.hpp>

namespace answerlearn {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dims(std::size_t policy_contexts, std::size_t d_contexts, std::size_t truth_contexts) {
  if (policy_contexts != d_contexts || policy_contexts != truth_contexts) {
    throw Error(ErrorCode::kDimensionMismatch, "policy, distribution and truth disagree on |X|");
  }
}

void require_context(const Policy& policy, ContextId x) {
  if (index(x) >= policy.num_contexts) throw Error(ErrorCode::kIndexOutOfRange, "context " + std::to_string(index(x)));
}

}  // namespace

ContextDistribution::ContextDistribution(std::vector<Rational> probs)
    : probs_(std::move(probs)), sampler_(probs_) {}

ContextDistribution ContextDistribution::uniform(std::size_t num_contexts) {
  if (num_contexts == 0) throw Error(ErrorCode::kInvalidArgument, "empty context space");
  return ContextDistribution(std::vector<Rational>(num_contexts, Rational(1, static_cast<long>(num_contexts))));
}

ContextDistribution ContextDistribution::point_mass(std::size_t num_contexts, ContextId x) {
  if (index(x) >= num_contexts) throw Error(ErrorCode::kIndexOutOfRange, "point mass outside X");
  std::vector<Rational> p(num_contexts, Rational(0));
  p[index(x)] = 1;
  return ContextDistribution(std::move(p));
}

bool ContextDistribution::is_uniform() const {
  return std::all_of(probs_.begin(), probs_.end(), [&](const Rational& p) { return p == probs_.front(); });
}

Policy deterministic_policy(std::size_t num_actions, std::vector<ActionId> actions) {
  for (ActionId y : actions) {
    if (index(y) >= num_actions) throw Error(ErrorCode::kIndexOutOfRange, "action " + std::to_string(index(y)));
  }
  Policy p;
  p.num_contexts = actions.size();
  p.num_actions = num_actions;
  p.kind = DeterministicPolicy{std::move(actions)};
  return p;
}

Policy uniform_support_policy(const SupportFunction& support, std::size_t num_actions) {
  for (const auto& s : support.per_context) {
    if (s.empty()) throw Error(ErrorCode::kEmptySupport, "uniform policy over an empty support");
    if (s.num_actions() != num_actions) throw Error(ErrorCode::kDimensionMismatch, "support width");
  }
  Policy p;
  p.num_contexts = support.num_contexts();
  p.num_actions = num_actions;
  p.kind = UniformSupportPolicy{support};
  return p;
}

Policy table_policy(std::vector<std::vector<Rational>> probs) {
  if (probs.empty() || probs.front().empty()) throw Error(ErrorCode::kDimensionMismatch, "empty table");
  const std::size_t num_actions = probs.front().size();
  for (const auto& row : probs) {
    if (row.size() != num_actions) throw Error(ErrorCode::kDimensionMismatch, "ragged policy table");
    Rational sum = 0;
    for (const auto& v : row) {
      if (v < 0) throw Error(ErrorCode::kInvalidArgument, "negative probability");
      sum += v;
    }
    if (sum != 1) throw Error(ErrorCode::kInvalidArgument, "policy row sums to " + to_string(sum));
  }
  Policy p;
  p.num_contexts = probs.size();
  p.num_actions = num_actions;
  p.kind = TablePolicy{std::move(probs)};
  return p;
}

Policy mixture_policy(std::size_t num_actions, std::vector<std::vector<ActionId>> predictions) {
  if (predictions.empty()) throw Error(ErrorCode::kInvalidArgument, "mixture of zero predictors");
  const std::size_t num_contexts = predictions.front().size();
  for (const auto& row : predictions) {
    if (row.size() != num_contexts) throw Error(ErrorCode::kDimensionMismatch, "ragged prediction table");
  }
  Policy p;
  p.num_contexts = num_contexts;
  p.num_actions = num_actions;
  p.kind = MixturePolicy{std::move(predictions), {}, 0};
  return p;
}

std::vector<Rational> action_probs(const Policy& policy, ContextId x) {
  require_context(policy, x);
  std::vector<Rational> out(policy.num_actions, Rational(0));
  std::visit(Overloaded{
                 [&](const DeterministicPolicy& p) { out[index(p.action[index(x)])] = 1; },
                 [&](const UniformSupportPolicy& p) {
                   const ActionSet& s = p.support(x);
                   const Rational share(1, static_cast<long>(s.count()));
                   s.view().for_each([&](ActionId y) { out[index(y)] = share; });
                 },
                 [&](const TablePolicy& p) { out = p.probs[index(x)]; },
                 [&](const MixturePolicy& p) {
                   std::vector<std::size_t> counts(policy.num_actions, 0);
                   for (const auto& row : p.predictions) ++counts[index(row[index(x)])];
                   const auto m = static_cast<long>(p.predictions.size());
                   for (std::size_t y = 0; y < counts.size(); ++y) {
                     if (counts[y] != 0) out[y] = Rational(static_cast<long>(counts[y]), m);
                   }
                 },
                 [&](const SamplerPolicy& p) {
                   throw Error(ErrorCode::kInexactPolicy, "policy '" + p.name + "' has no exact probabilities");
                 },
             },
             policy.kind);
  return out;
}

ActionId sample_action(const Policy& policy, ContextId x, SplitMix64& rng) {
  require_context(policy, x);
  return std::visit(Overloaded{
                        [&](const DeterministicPolicy& p) { return p.action[index(x)]; },
                        [&](const UniformSupportPolicy& p) {
                          const auto members = p.support(x).to_vector();
                          return members[rng.uniform_below(members.size())];
                        },
                        [&](const TablePolicy& p) {
                          return action(DiscreteSampler(p.probs[index(x)]).sample(rng));
                        },
                        [&](const MixturePolicy& p) {
                          return p.predictions[rng.uniform_below(p.predictions.size())][index(x)];
                        },
                        [&](const SamplerPolicy& p) { return p.sample(x, rng); },
                    },
                    policy.kind);
}

std::vector<WeightedTuple> tuple_distribution(const ListPolicy& mu, ContextId x) {
  if (index(x) >= mu.num_contexts) throw Error(ErrorCode::kIndexOutOfRange, "context " + std::to_string(index(x)));
  return std::visit(Overloaded{
                        [&](const DeterministicKPolicy& p) {
                          return std::vector<WeightedTuple>{{p.lists[index(x)], Rational(1)}};
                        },
                        [&](const MixtureKPolicy& p) {
                          std::map<std::vector<std::uint32_t>, long> counts;
                          for (const auto& row : p.predictions) {
                            std::vector<std::uint32_t> key;
                            for (ActionId y : row[index(x)]) key.push_back(static_cast<std::uint32_t>(index(y)));
                            ++counts[key];
                          }
                          std::vector<WeightedTuple> out;
                          const auto m = static_cast<long>(p.predictions.size());
                          for (const auto& [key, c] : counts) {
                            std::vector<ActionId> tuple;
                            for (auto v : key) tuple.push_back(action(v));
                            out.emplace_back(std::move(tuple), Rational(c, m));
                          }
                          return out;
                        },
                    },
                    mu.kind);
}

Policy induced_policy(const ListPolicy& mu) {
  if (mu.k != 1) throw Error(ErrorCode::kInvalidArgument, "induced policy needs k = 1");
  return std::visit(Overloaded{
                        [&](const DeterministicKPolicy& p) {
                          std::vector<ActionId> actions;
                          for (const auto& l : p.lists) actions.push_back(l.front());
                          return deterministic_policy(mu.num_actions, std::move(actions));
                        },
                        [&](const MixtureKPolicy& p) {
                          std::vector<std::vector<ActionId>> table;
                          for (const auto& row : p.predictions) {
                            std::vector<ActionId> r;
                            for (const auto& l : row) r.push_back(l.front());
                            table.push_back(std::move(r));
                          }
                          return mixture_policy(mu.num_actions, std::move(table));
                        },
                    },
                    mu.kind);
}

Rational loss_exact(const Policy& policy, const ContextDistribution& d, const SupportFunction& truth) {
  require_dims(policy.num_contexts, d.size(), truth.num_contexts());
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[context(x)] == 0) continue;
    const auto probs = action_probs(policy, context(x));
    Rational miss = 0;
    for (std::size_t y = 0; y < probs.size(); ++y) {
      if (probs[y] != 0 && !truth(context(x)).contains(action(y))) miss += probs[y];
    }
    total += d[context(x)] * miss;
  }
  return total;
}

Rational value_exact(const Policy& policy, const ContextDistribution& d, const RewardFunction& r) {
  require_dims(policy.num_contexts, d.size(), r.num_contexts());
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[context(x)] == 0) continue;
    const auto probs = action_probs(policy, context(x));
    Rational v = 0;
    for (std::size_t y = 0; y < probs.size(); ++y) {
      if (probs[y] != 0) v += probs[y] * r(context(x), action(y));
    }
    total += d[context(x)] * v;
  }
  return total;
}

Rational passk_loss_exact(const ListPolicy& mu, const ContextDistribution& d, const SupportFunction& truth) {
  require_dims(mu.num_contexts, d.size(), truth.num_contexts());
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[context(x)] == 0) continue;
    Rational miss = 0;
    for (const auto& [tuple, p] : tuple_distribution(mu, context(x))) {
      const bool hit = std::any_of(tuple.begin(), tuple.end(),
                                   [&](ActionId y) { return truth(context(x)).contains(y); });
      if (!hit) miss += p;
    }
    total += d[context(x)] * miss;
  }
  return total;
}

Rational passk_value_exact(const ListPolicy& mu, const ContextDistribution& d, const RewardFunction& r) {
  require_dims(mu.num_contexts, d.size(), r.num_contexts());
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[context(x)] == 0) continue;
    Rational v = 0;
    for (const auto& [tuple, p] : tuple_distribution(mu, context(x))) {
      Rational best = 0;
      for (ActionId y : tuple) best = std::max(best, r(context(x), y));
      v += p * best;
    }
    total += d[context(x)] * v;
  }
  return total;
}

Rational optimal_value(const ContextDistribution& d, const RewardFunction& r) {
  if (d.size() != r.num_contexts()) throw Error(ErrorCode::kDimensionMismatch, "distribution and reward disagree on |X|");
  Rational total = 0;
  for (std::size_t x = 0; x < d.size(); ++x) total += d[context(x)] * r.row_max(context(x));
  return total;
}

std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t n, double confidence) {
  if (n == 0) return {0.0, 1.0};
  const double tail = (1.0 - confidence) / 2.0;
  const auto k = static_cast<double>(failures);
  const auto total = static_cast<double>(n);
  double low = 0.0;
  double high = 1.0;
  if (failures > 0) low = boost::math::quantile(boost::math::beta_distribution<double>(k, total - k + 1), tail);
  if (failures < n) high = boost::math::quantile(boost::math::beta_distribution<double>(k + 1, total - k), 1.0 - tail);
  return {low, high};
}

McEstimate loss_mc(const Policy& policy, const ContextDistribution& d, const SupportFunction& truth,
                   std::uint64_t n, std::uint64_t seed) {
  require_dims(policy.num_contexts, d.size(), truth.num_contexts());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "loss_mc needs n >= 1");
  SplitMix64 rng(seed);
  McEstimate est;
  est.samples = n;
  for (std::uint64_t i = 0; i < n; ++i) {
    const ContextId x = d.sample(rng);
    const ActionId y = sample_action(policy, x, rng);
    if (!truth(x).contains(y)) ++est.failures;
  }
  est.estimate = static_cast<double>(est.failures) / static_cast<double>(n);
  std::tie(est.ci_low, est.ci_high) = clopper_pearson(est.failures, n);
  return est;
}

}  // namespace answerlearn
