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

#include "answerlearn/batch.hpp"

#include <algorithm>

#include "answerlearn/passk.hpp"

namespace answerlearn {
namespace {

WeightMode other(WeightMode mode) {
  return mode == WeightMode::kExact ? WeightMode::kLogFloat : WeightMode::kExact;
}

void require_data(const ModelClass& cls, const Dataset& data) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "online-to-batch needs at least one example");
  require_in_range(cls, data);
}

WeightState template_state(const SnapshotMixture& mixture) {
  return mixture.boost ? WeightState::create_boost(mixture.cls, mixture.k)
                       : WeightState::create(mixture.cls, mixture.params);
}

}  // namespace

Policy SnapshotMixture::as_policy() const {
  if (k != 1) throw Error(ErrorCode::kInvalidArgument, "single-action policy needs k = 1");
  std::vector<std::vector<ActionId>> table;
  table.reserve(predictions.size());
  for (const auto& row : predictions) {
    std::vector<ActionId> r;
    r.reserve(row.size());
    for (const auto& list : row) r.push_back(list.front());
    table.push_back(std::move(r));
  }
  return mixture_policy(cls->num_actions(), std::move(table));
}

ListPolicy SnapshotMixture::as_list_policy() const {
  ListPolicy mu;
  mu.num_contexts = cls->num_contexts();
  mu.num_actions = cls->num_actions();
  mu.k = k;
  mu.kind = MixtureKPolicy{predictions};
  return mu;
}

SnapshotMixture train_o2b(std::shared_ptr<const ModelClass> cls, const Dataset& data, const Hyperparams& params,
                          const O2bOptions& options, O2bStats* stats) {
  require_data(*cls, data);
  WeightState state = WeightState::create(cls, params, options.mode);
  SnapshotMixture mix;
  mix.cls = cls;
  mix.params = params;
  mix.k = 1;
  const std::size_t nx = cls->num_contexts();
  mix.predictions.reserve(data.size());
  for (const auto& [x, y] : data) {
    if (options.keep_snapshots) mix.snapshots.push_back(snapshot(state));
    std::vector<std::vector<ActionId>> row(nx);
    for (std::size_t c = 0; c < nx; ++c) {
      const Prediction p = predict(state, context(c));
      row[c] = {p.action};
      if (stats) {
        if (p.degenerate) ++stats->degenerate;
        if (options.cross_check && predict(state, context(c), other(options.mode)).action != p.action) {
          ++stats->mode_disagreements;
        }
      }
    }
    const ActionId y_hat = row[index(x)].front();
    mix.predictions.push_back(std::move(row));
    update(state, x, y_hat, y);
  }
  return mix;
}

SnapshotMixture train_o2b_passk(std::shared_ptr<const ModelClass> cls, const Dataset& data, std::size_t k,
                                const O2bOptions& options, O2bStats* stats) {
  require_data(*cls, data);
  WeightState state = WeightState::create_boost(cls, k, options.mode);
  SnapshotMixture mix;
  mix.cls = cls;
  mix.params = state.params();
  mix.k = k;
  mix.boost = true;
  const std::size_t nx = cls->num_contexts();
  mix.predictions.reserve(data.size());
  for (const auto& [x, y] : data) {
    if (options.keep_snapshots) mix.snapshots.push_back(snapshot(state));
    std::vector<std::vector<ActionId>> row(nx);
    KSelection chosen;
    for (std::size_t c = 0; c < nx; ++c) {
      KSelection sel = predict_k(state, context(c), k, false);
      if (stats) {
        if (sel.degenerate) ++stats->degenerate;
        if (options.cross_check &&
            predict_k(state, context(c), k, other(options.mode), false).actions != sel.actions) {
          ++stats->mode_disagreements;
        }
      }
      row[c] = sel.actions;
      if (context(c) == x) chosen = std::move(sel);
    }
    mix.predictions.push_back(std::move(row));
    update_k(state, x, chosen, y);
  }
  return mix;
}

Rational expected_loss_exact(const SnapshotMixture& mixture, const ContextDistribution& d,
                             const SupportFunction& truth) {
  if (mixture.k != 1) return expected_passk_loss_exact(mixture, d, truth);
  if (mixture.snapshots.empty()) throw Error(ErrorCode::kInvalidArgument, "mixture holds no snapshots");
  const WeightState like = template_state(mixture);
  Rational sum = 0;
  for (const auto& snap : mixture.snapshots) {
    const WeightState s = restore(like, snap);
    std::vector<ActionId> actions(d.size());
    for (std::size_t x = 0; x < d.size(); ++x) actions[x] = predict(s, context(x)).action;
    sum += loss_exact(deterministic_policy(mixture.cls->num_actions(), std::move(actions)), d, truth);
  }
  return sum / static_cast<long>(mixture.snapshots.size());
}

Rational expected_passk_loss_exact(const SnapshotMixture& mixture, const ContextDistribution& d,
                                   const SupportFunction& truth) {
  if (mixture.snapshots.empty()) throw Error(ErrorCode::kInvalidArgument, "mixture holds no snapshots");
  const WeightState like = template_state(mixture);
  Rational sum = 0;
  for (const auto& snap : mixture.snapshots) {
    const WeightState s = restore(like, snap);
    ListPolicy mu;
    mu.num_contexts = d.size();
    mu.num_actions = mixture.cls->num_actions();
    mu.k = mixture.k;
    DeterministicKPolicy lists;
    for (std::size_t x = 0; x < d.size(); ++x) {
      lists.lists.push_back(mixture.boost ? predict_k(s, context(x), mixture.k, false).actions
                                          : std::vector<ActionId>{predict(s, context(x)).action});
    }
    mu.kind = std::move(lists);
    sum += passk_loss_exact(mu, d, truth);
  }
  return sum / static_cast<long>(mixture.snapshots.size());
}

}  // namespace answerlearn
