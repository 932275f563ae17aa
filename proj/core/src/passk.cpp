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

#include "answerlearn/passk.hpp"

#include <algorithm>
#include <string>

#include "detail/tallies.hpp"

namespace answerlearn {
namespace {

constexpr double kFloatTieTolerance = 1e-9;

std::size_t float_pick(const detail::FloatTallies& t, const std::vector<bool>& allowed) {
  double best = -1.0;
  for (std::size_t y = 0; y < t.value.size(); ++y) {
    if (allowed[y]) best = std::max(best, t.value[y]);
  }
  const double cutoff = best * (1.0 - kFloatTieTolerance);
  for (std::size_t y = 0; y < t.value.size(); ++y) {
    if (allowed[y] && t.value[y] >= cutoff) return y;
  }
  return 0;
}

}  // namespace

KSelection predict_k(const WeightState& state, ContextId x, std::size_t k, bool with_marginals) {
  return predict_k(state, x, k, state.mode(), with_marginals);
}

KSelection predict_k(const WeightState& state, ContextId x, std::size_t k, WeightMode mode, bool with_marginals) {
  const ModelClass& cls = state.model();
  if (state.params().beta != 0) {
    throw Error(ErrorCode::kInvalidHyperparams, "list prediction needs beta = 0");
  }
  if (k == 0 || k > cls.num_actions()) {
    throw Error(ErrorCode::kInvalidArgument, "k=" + std::to_string(k) + " outside [1, |Y|]");
  }
  if (index(x) >= cls.num_contexts()) throw Error(ErrorCode::kIndexOutOfRange, "context " + std::to_string(index(x)));

  KSelection sel;
  sel.covered.assign(state.size(), false);
  std::vector<bool> used(cls.num_actions(), false);
  std::optional<detail::ExactScale> scale;
  auto exact = [&]() -> const detail::ExactScale& {
    if (!scale) scale.emplace(state);
    return *scale;
  };
  bool any_positive = false;
  for (std::size_t h = 0; h < state.size() && !any_positive; ++h) any_positive = state.positive(h);
  sel.degenerate = !any_positive;

  for (std::size_t step = 0; step < k; ++step) {
    std::vector<bool> allowed(cls.num_actions());
    for (std::size_t y = 0; y < used.size(); ++y) allowed[y] = !used[y];
    const detail::FloatTallies t = detail::float_tallies(state, x, &sel.covered);
    std::size_t pick = 0;
    if (!t.any_positive) {
      pick = static_cast<std::size_t>(std::find(allowed.begin(), allowed.end(), true) - allowed.begin());
    } else if (mode == WeightMode::kLogFloat) {
      pick = float_pick(t, allowed);
    } else {
      const auto candidates = detail::exact_candidates(t, allowed);
      pick = candidates.size() == 1 ? candidates.front()
                                    : detail::exact_argmax(state, exact(), x, candidates, &sel.covered);
    }
    used[pick] = true;
    sel.actions.push_back(action(pick));
    BigInt gained = 0;
    for (std::size_t h = 0; h < state.size(); ++h) {
      if (sel.covered[h] || !cls.contains(h, x, action(pick))) continue;
      sel.covered[h] = true;
      if (with_marginals && t.any_positive && state.positive(h)) gained += exact().numerator(h);
    }
    if (with_marginals) {
      sel.marginals.push_back(gained == 0 ? Rational(0) : Rational(gained, exact().denominator()));
    }
  }
  return sel;
}

void update_k(WeightState& state, ContextId x, const KSelection& selection, ActionId y) {
  if (state.scheme() != WeightScheme::kBoost) {
    throw Error(ErrorCode::kInvalidArgument, "update_k needs a list-learner state");
  }
  const ModelClass& cls = state.model();
  if (index(x) >= cls.num_contexts() || index(y) >= cls.num_actions()) {
    throw Error(ErrorCode::kIndexOutOfRange, "update indices out of range");
  }
  if (selection.covered.size() != state.size()) throw Error(ErrorCode::kDimensionMismatch, "selection mask size");
  for (std::size_t h = 0; h < state.size(); ++h) {
    Counters& c = state.mutable_counters(h);
    const bool covered = selection.covered[h];
    if (!covered) ++c.a;
    if (!cls.contains(h, x, y)) {
      ++c.b;
      c.alive = false;
    } else if (!covered && c.alive) {
      ++c.c;
    }
  }
  state.advance_round();
}

KeyInequality key_inequality(const WeightState& state, ContextId x, const KSelection& selection, ActionId y) {
  const ModelClass& cls = state.model();
  const detail::ExactScale scale(state);
  BigInt outside = 0;
  BigInt inside = 0;
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (!state.positive(h)) continue;
    const bool in_y = cls.contains(h, x, y);
    if (selection.covered[h] && !in_y) outside += scale.numerator(h);
    if (!selection.covered[h] && in_y) inside += scale.numerator(h);
  }
  const BigInt denom = scale.denominator();
  KeyInequality out;
  out.holds = outside >= BigInt(state.k()) * inside;
  out.outside = Rational(outside, denom);
  out.inside = Rational(inside, denom);
  return out;
}

}  // namespace answerlearn
