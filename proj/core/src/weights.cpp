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

#include "answerlearn/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "detail/tallies.hpp"

namespace answerlearn {
namespace {

constexpr double kFloatTieTolerance = 1e-9;

double safe_log(const Rational& r) { return r > 0 ? std::log(to_double(r)) : 0.0; }

}  // namespace

WeightState WeightState::create(std::shared_ptr<const ModelClass> cls, Hyperparams params, WeightMode mode,
                                bool require_monotone) {
  if (!cls) throw Error(ErrorCode::kInvalidArgument, "null model class");
  require_valid(*cls);
  if (params.alpha < 0 || params.beta < 0) {
    throw Error(ErrorCode::kInvalidHyperparams, "alpha and beta must be non-negative");
  }
  if (require_monotone && !params.monotone()) {
    throw Error(ErrorCode::kInvalidHyperparams,
                "alpha=" + to_string(params.alpha) + ", beta=" + to_string(params.beta) +
                    " violates alpha <= 2 - beta or alpha * beta <= 1");
  }
  WeightState s;
  s.cls_ = std::move(cls);
  s.params_ = std::move(params);
  s.scheme_ = WeightScheme::kAlphaBeta;
  s.base_ = s.params_.alpha;
  s.log_base_ = safe_log(s.base_);
  s.log_beta_ = safe_log(s.params_.beta);
  s.base_zero_ = s.base_ == 0;
  s.beta_zero_ = s.params_.beta == 0;
  s.mode_ = mode;
  s.counters_.assign(s.cls_->size(), Counters{});
  return s;
}

WeightState WeightState::create_boost(std::shared_ptr<const ModelClass> cls, std::size_t k, WeightMode mode) {
  if (!cls) throw Error(ErrorCode::kInvalidArgument, "null model class");
  require_valid(*cls);
  if (k == 0) throw Error(ErrorCode::kInvalidHyperparams, "k must be at least 1");
  WeightState s;
  s.cls_ = std::move(cls);
  s.params_ = {Rational(static_cast<long>(k + 1)), Rational(0)};
  s.scheme_ = WeightScheme::kBoost;
  s.k_ = k;
  s.base_ = s.params_.alpha;
  s.log_base_ = safe_log(s.base_);
  s.log_beta_ = safe_log(s.params_.beta);
  s.base_zero_ = s.base_ == 0;
  s.beta_zero_ = s.params_.beta == 0;
  s.mode_ = mode;
  s.counters_.assign(s.cls_->size(), Counters{});
  return s;
}

bool WeightState::positive(std::size_t h) const {
  const Counters& c = counters_[h];
  if (!c.alive) return false;
  if (scheme_ == WeightScheme::kBoost) return true;
  return !(base_zero_ && c.a > 0) && !(beta_zero_ && c.b > 0);
}

Rational WeightState::weight(std::size_t h) const {
  if (!positive(h)) return Rational(0);
  if (scheme_ == WeightScheme::kBoost) return pow(base_, counters_[h].c);
  return pow(base_, counters_[h].a) * pow(params_.beta, counters_[h].b);
}

double WeightState::log_weight(std::size_t h) const {
  if (!positive(h)) return -std::numeric_limits<double>::infinity();
  double v = exponent(h) * log_base_;
  if (scheme_ == WeightScheme::kAlphaBeta && counters_[h].b > 0) v += counters_[h].b * log_beta_;
  return v;
}

ScaledWeights scaled_weights(const WeightState& state) {
  detail::ExactScale scale(state);
  ScaledWeights out;
  out.numerators.reserve(state.size());
  for (std::size_t h = 0; h < state.size(); ++h) out.numerators.push_back(scale.numerator(h));
  out.denominator = scale.denominator();
  return out;
}

namespace detail {

ExactScale::ExactScale(const WeightState& state) : state_(&state) {
  const bool boost = state.scheme() == WeightScheme::kBoost;
  p1_ = boost::multiprecision::numerator(state.base());
  q1_ = boost::multiprecision::denominator(state.base());
  p2_ = boost ? BigInt(1) : BigInt(boost::multiprecision::numerator(state.params().beta));
  q2_ = boost ? BigInt(1) : BigInt(boost::multiprecision::denominator(state.params().beta));
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (!state.positive(h)) continue;
    max_e_ = std::max(max_e_, state.exponent(h));
    if (!boost) max_b_ = std::max(max_b_, state.counters(h).b);
  }
  fill_powers(p1_, max_e_, p1_pow_);
  fill_powers(q1_, max_e_, q1_pow_);
  fill_powers(p2_, max_b_, p2_pow_);
  fill_powers(q2_, max_b_, q2_pow_);
}

void ExactScale::fill_powers(const BigInt& base, std::uint32_t top, std::vector<BigInt>& out) {
  out.assign(1, BigInt(1));
  if (base == 1) return;
  out.reserve(top + 1);
  for (std::uint32_t i = 1; i <= top; ++i) out.push_back(out.back() * base);
}

const BigInt& ExactScale::power(const std::vector<BigInt>& table, std::uint32_t e) {
  return table.size() == 1 ? table[0] : table[e];
}

BigInt ExactScale::numerator(std::size_t h) const {
  if (!state_->positive(h)) return BigInt(0);
  const std::uint32_t e = state_->exponent(h);
  BigInt n = power(p1_pow_, e) * power(q1_pow_, max_e_ - e);
  if (state_->scheme() == WeightScheme::kAlphaBeta) {
    const std::uint32_t b = state_->counters(h).b;
    n *= power(p2_pow_, b);
    n *= power(q2_pow_, max_b_ - b);
  }
  return n;
}

BigInt ExactScale::denominator() const { return power(q1_pow_, max_e_) * power(q2_pow_, max_b_); }

FloatTallies float_tallies(const WeightState& state, ContextId x, const std::vector<bool>* excluded) {
  const ModelClass& cls = state.model();
  const std::size_t ny = cls.num_actions();
  FloatTallies t;
  t.value.assign(ny, 0.0);
  t.error.assign(ny, 0.0);
  std::vector<double> comp(ny, 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (excluded && (*excluded)[h]) continue;
    if (state.positive(h)) max_log = std::max(max_log, state.log_weight(h));
  }
  if (!std::isfinite(max_log)) return t;
  t.any_positive = true;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (excluded && (*excluded)[h]) continue;
    if (!state.positive(h)) continue;
    const double lw = state.log_weight(h);
    const double term = std::exp(lw - max_log);
    const double rel = 8 * kEps * (1.0 + std::abs(lw) + std::abs(max_log));
    cls.support(h, x).for_each([&](ActionId y) {
      const std::size_t i = index(y);
      // Kahan-compensated accumulation.
      const double adj = term - comp[i];
      const double next = t.value[i] + adj;
      comp[i] = (next - t.value[i]) - adj;
      t.value[i] = next;
      t.error[i] += term * rel;
    });
  }
  for (std::size_t y = 0; y < ny; ++y) t.error[y] = 4 * (t.error[y] + 8 * kEps * t.value[y]) + 1e-300;
  return t;
}

std::size_t float_argmax(const FloatTallies& t) {
  const double best = *std::max_element(t.value.begin(), t.value.end());
  const double cutoff = best * (1.0 - kFloatTieTolerance);
  for (std::size_t y = 0; y < t.value.size(); ++y) {
    if (t.value[y] >= cutoff) return y;
  }
  return 0;
}

std::vector<std::size_t> exact_candidates(const FloatTallies& t, const std::vector<bool>& allowed) {
  double best_lower = -1.0;
  for (std::size_t y = 0; y < t.value.size(); ++y) {
    if (allowed[y]) best_lower = std::max(best_lower, t.value[y] - t.error[y]);
  }
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < t.value.size(); ++y) {
    if (allowed[y] && t.value[y] + t.error[y] >= best_lower) out.push_back(y);
  }
  return out;
}

std::size_t exact_argmax(const WeightState& state, const ExactScale& scale, ContextId x,
                         const std::vector<std::size_t>& candidates, const std::vector<bool>* excluded) {
  if (candidates.size() == 1) return candidates.front();
  const ModelClass& cls = state.model();
  std::vector<BigInt> tally(candidates.size(), BigInt(0));
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (excluded && (*excluded)[h]) continue;
    if (!state.positive(h)) continue;
    const ActionSetView s = cls.support(h, x);
    BigInt n;
    bool have = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!s.contains(action(candidates[i]))) continue;
      if (!have) {
        n = scale.numerator(h);
        have = true;
      }
      tally[i] += n;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (tally[i] > tally[best]) best = i;
  }
  return candidates[best];
}

}  // namespace detail

Prediction predict(const WeightState& state, ContextId x) { return predict(state, x, state.mode()); }

Prediction predict(const WeightState& state, ContextId x, WeightMode mode) {
  if (index(x) >= state.model().num_contexts()) {
    throw Error(ErrorCode::kIndexOutOfRange, "context " + std::to_string(index(x)));
  }
  const detail::FloatTallies t = detail::float_tallies(state, x, nullptr);
  if (!t.any_positive) return {action(0), true};
  if (mode == WeightMode::kLogFloat) return {action(detail::float_argmax(t)), false};
  const std::vector<bool> allowed(state.model().num_actions(), true);
  const auto candidates = detail::exact_candidates(t, allowed);
  if (candidates.size() == 1) return {action(candidates.front()), false};
  const detail::ExactScale scale(state);
  return {action(detail::exact_argmax(state, scale, x, candidates, nullptr)), false};
}

std::vector<Rational> exact_tallies(const WeightState& state, ContextId x) {
  const ModelClass& cls = state.model();
  std::vector<Rational> out(cls.num_actions(), Rational(0));
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (!state.positive(h)) continue;
    const Rational w = state.weight(h);
    cls.support(h, x).for_each([&](ActionId y) { out[index(y)] += w; });
  }
  return out;
}

void update(WeightState& state, ContextId x, ActionId y_hat, ActionId y) {
  if (state.scheme() != WeightScheme::kAlphaBeta) {
    throw Error(ErrorCode::kInvalidArgument, "list-learner state takes update_k");
  }
  const ModelClass& cls = state.model();
  if (index(x) >= cls.num_contexts() || index(y) >= cls.num_actions() || index(y_hat) >= cls.num_actions()) {
    throw Error(ErrorCode::kIndexOutOfRange, "update indices out of range");
  }
  const bool beta_zero = state.params().beta == 0;
  for (std::size_t h = 0; h < state.size(); ++h) {
    const ActionSetView s = cls.support(h, x);
    Counters& c = state.mutable_counters(h);
    if (!s.contains(y_hat)) ++c.a;
    if (!s.contains(y)) {
      ++c.b;
      if (beta_zero) c.alive = false;
    }
  }
  state.advance_round();
}

Rational total_weight(const WeightState& state) {
  const detail::ExactScale scale(state);
  BigInt sum = 0;
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (state.positive(h)) sum += scale.numerator(h);
  }
  return Rational(sum, scale.denominator());
}

double log_total_weight(const WeightState& state) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < state.size(); ++h) max_log = std::max(max_log, state.log_weight(h));
  if (!std::isfinite(max_log)) return max_log;
  double sum = 0.0;
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (state.positive(h)) sum += std::exp(state.log_weight(h) - max_log);
  }
  return max_log + std::log(sum);
}

WeightSnapshot snapshot(const WeightState& state) { return {state.round(), state.all_counters()}; }

WeightState restore(const WeightState& like, const WeightSnapshot& snap) {
  if (snap.counters.size() != like.size()) throw Error(ErrorCode::kDimensionMismatch, "snapshot size");
  WeightState s = like;
  for (std::size_t h = 0; h < s.size(); ++h) s.mutable_counters(h) = snap.counters[h];
  s.set_round(snap.round);
  return s;
}

namespace {

ActionId tally_argmax(const ModelClass& cls, const std::vector<std::size_t>& members, ContextId x) {
  std::vector<std::size_t> votes(cls.num_actions(), 0);
  for (std::size_t h : members) cls.support(h, x).for_each([&](ActionId y) { ++votes[index(y)]; });
  return action(static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin()));
}

CiPrediction ci_from_members(const ModelClass& cls, const std::vector<std::size_t>& members, ContextId x) {
  CiPrediction out;
  if (members.empty()) {
    out.action = action(0);
    out.non_realizable = true;
    return out;
  }
  ActionSet inter(cls.support(members.front(), x));
  for (std::size_t h : members) inter &= cls.support(h, x);
  if (auto y = inter.min()) {
    out.action = *y;
    out.in_intersection = true;
  } else {
    out.action = *cls.support(members.front(), x).min();
  }
  return out;
}

}  // namespace

ActionId majority_predict(const ModelClass& cls, const Dataset& data, ContextId x) {
  return tally_argmax(cls, consistent_set(cls, data), x);
}

ActionId majority_predict(const ModelClass& cls, const VersionSpace& space, ContextId x) {
  return tally_argmax(cls, space.members(), x);
}

CiPrediction common_intersection_predict(const ModelClass& cls, const Dataset& data, ContextId x) {
  return ci_from_members(cls, consistent_set(cls, data), x);
}

CiPrediction common_intersection_predict(const ModelClass& cls, const VersionSpace& space, ContextId x) {
  return ci_from_members(cls, space.members(), x);
}

MistakeLedger MistakeLedger::from_state(const WeightState& state) {
  MistakeLedger ledger;
  ledger.alg_mistakes.reserve(state.size());
  ledger.mistakes.reserve(state.size());
  for (const Counters& c : state.all_counters()) {
    ledger.alg_mistakes.push_back(c.a);
    ledger.mistakes.push_back(c.b);
  }
  return ledger;
}

RegretReport regret_check(const MistakeLedger& ledger, const Hyperparams& params) {
  if (!(params.alpha > 1) || !(params.beta > 0) || !(params.beta < 1)) {
    throw Error(ErrorCode::kInvalidHyperparams, "regret bound needs alpha > 1 and 0 < beta < 1");
  }
  const std::size_t n = ledger.alg_mistakes.size();
  if (ledger.mistakes.size() != n || n == 0) throw Error(ErrorCode::kDimensionMismatch, "ledger shape");
  const Rational size(static_cast<long>(n));
  const double log_alpha = std::log(to_double(params.alpha));
  const double log_inv_beta = -std::log(to_double(params.beta));
  RegretReport report;
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < n; ++h) {
    RegretEntry e;
    e.hypothesis = h;
    e.alg_mistakes = ledger.alg_mistakes[h];
    e.mistakes = ledger.mistakes[h];
    e.bound = (std::log(static_cast<double>(n)) + static_cast<double>(e.mistakes) * log_inv_beta) / log_alpha;
    e.slack = e.bound - static_cast<double>(e.alg_mistakes);
    if (pow(params.alpha, e.alg_mistakes) * pow(params.beta, e.mistakes) > size) {
      throw Error(ErrorCode::kBoundViolated, "regret bound fails for hypothesis " + std::to_string(h));
    }
    report.worst_slack = std::min(report.worst_slack, e.slack);
    report.entries.push_back(e);
  }
  return report;
}

std::optional<std::uint64_t> realizable_mistake_bound(const Hyperparams& params, std::size_t class_size) {
  if (params.beta != 0 || class_size == 0) return std::nullopt;
  if (params.alpha == 1) return class_size - 1;
  if (!(params.alpha > 1)) return std::nullopt;
  const Rational n(static_cast<long>(class_size));
  std::uint64_t m = 0;
  Rational p = params.alpha;
  while (p <= n) {
    ++m;
    p *= params.alpha;
  }
  return m;
}

}  // namespace answerlearn
