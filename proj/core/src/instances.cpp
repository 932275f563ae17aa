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

#include "answerlearn/instances.hpp"

#include <cmath>
#include <string>

#include "answerlearn/rng.hpp"

namespace answerlearn {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

void fnv_word(std::uint64_t& h, std::uint64_t w) {
  for (int i = 0; i < 8; ++i) {
    h ^= (w >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

SupportFunction constant_support(std::size_t num_contexts, const ActionSet& set, std::string name) {
  return {std::vector<ActionSet>(num_contexts, set), std::move(name)};
}

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (n > cap / base) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  std::to_string(base) + "^" + std::to_string(exponent) + " hypotheses exceed the cap of " +
                      std::to_string(cap));
    }
    n *= base;
  }
  if (n > cap) throw Error(ErrorCode::kInstanceTooLarge, "class exceeds the cap");
  return n;
}

// Every function from num_contexts contexts to single actions, in mixed-radix order.
std::shared_ptr<ModelClass> product_class(std::size_t num_contexts, std::size_t num_actions, std::size_t cap) {
  const std::size_t n = checked_power(num_actions, num_contexts, cap);
  auto cls = std::make_shared<ModelClass>(num_contexts, num_actions);
  cls->reserve(n);
  SupportFunction f;
  f.per_context.assign(num_contexts, ActionSet(num_actions));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rest = i;
    for (std::size_t x = num_contexts; x-- > 0;) {
      f.per_context[x] = ActionSet(num_actions, {rest % num_actions});
      rest /= num_actions;
    }
    cls->add_member(f);
  }
  return cls;
}

std::string rational_label(const Rational& r) { return to_string(r); }

}  // namespace

DemonstratorSpec DemonstratorSpec::deterministic_max() {
  DemonstratorSpec s;
  s.kind = Kind::kDeterministicMax;
  return s;
}

DemonstratorSpec DemonstratorSpec::uniform_support() {
  DemonstratorSpec s;
  s.kind = Kind::kUniformSupport;
  return s;
}

DemonstratorSpec DemonstratorSpec::from_table(std::vector<std::vector<Rational>> table) {
  DemonstratorSpec s;
  s.kind = Kind::kTable;
  s.table = std::move(table);
  return s;
}

DemonstratorSpec DemonstratorSpec::adaptive_script(AdaptiveFn fn, std::string label) {
  DemonstratorSpec s;
  s.kind = Kind::kAdaptive;
  s.adaptive = std::move(fn);
  s.label = std::move(label);
  return s;
}

const char* to_string(DemonstratorSpec::Kind kind) {
  switch (kind) {
    case DemonstratorSpec::Kind::kDeterministicMin: return "deterministic_min";
    case DemonstratorSpec::Kind::kDeterministicMax: return "deterministic_max";
    case DemonstratorSpec::Kind::kUniformSupport: return "uniform_support";
    case DemonstratorSpec::Kind::kTable: return "table";
    case DemonstratorSpec::Kind::kAdaptive: return "adaptive";
    case DemonstratorSpec::Kind::kSuboptimal: return "suboptimal";
  }
  return "unknown";
}

Policy ProblemInstance::demonstrator_policy() const {
  using Kind = DemonstratorSpec::Kind;
  const std::size_t nx = cls->num_contexts();
  switch (demonstrator.kind) {
    case Kind::kDeterministicMin:
    case Kind::kDeterministicMax: {
      std::vector<ActionId> actions(nx);
      for (std::size_t x = 0; x < nx; ++x) {
        const ActionSetView s = cls->support(truth, context(x));
        actions[x] = demonstrator.kind == Kind::kDeterministicMin ? *s.min() : *s.max();
      }
      return deterministic_policy(cls->num_actions(), std::move(actions));
    }
    case Kind::kUniformSupport:
      return uniform_support_policy(truth_support(), cls->num_actions());
    case Kind::kTable:
    case Kind::kSuboptimal:
      return table_policy(demonstrator.table);
    case Kind::kAdaptive:
      break;
  }
  throw Error(ErrorCode::kAdaptiveNotSamplable, "adaptive demonstrators have no fixed policy");
}

std::uint64_t ProblemInstance::hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_word(h, cls->content_hash());
  fnv_word(h, truth);
  for (const auto& p : distribution.probs()) {
    fnv_bytes(h, to_string(p));
    fnv_bytes(h, ";");
  }
  fnv_bytes(h, to_string(demonstrator.kind));
  for (const auto& row : demonstrator.table) {
    for (const auto& p : row) {
      fnv_bytes(h, to_string(p));
      fnv_bytes(h, ",");
    }
  }
  fnv_bytes(h, demonstrator.label);
  return h;
}

ValidationResult validate_instance(const ProblemInstance& instance) {
  using Kind = DemonstratorSpec::Kind;
  ValidationResult r = validate_class(*instance.cls);
  if (!r) return r;
  auto fail = [&](ErrorCode code, std::string message) {
    r.ok = false;
    r.code = code;
    r.message = std::move(message);
    return r;
  };
  const ModelClass& cls = *instance.cls;
  if (instance.truth >= cls.size()) return fail(ErrorCode::kIndexOutOfRange, "truth index out of range");
  if (instance.distribution.size() != cls.num_contexts()) {
    return fail(ErrorCode::kDimensionMismatch, "distribution size differs from |X|");
  }
  const auto& d = instance.demonstrator;
  if (d.kind == Kind::kTable || d.kind == Kind::kSuboptimal) {
    if (d.table.size() != cls.num_contexts()) return fail(ErrorCode::kDimensionMismatch, "demonstrator rows");
    for (std::size_t x = 0; x < d.table.size(); ++x) {
      if (d.table[x].size() != cls.num_actions()) return fail(ErrorCode::kDimensionMismatch, "demonstrator columns");
      Rational sum = 0;
      for (std::size_t y = 0; y < d.table[x].size(); ++y) {
        const Rational& p = d.table[x][y];
        if (p < 0) return fail(ErrorCode::kInvalidArgument, "negative demonstrator probability");
        sum += p;
        if (d.kind == Kind::kTable && p > 0 && !cls.contains(instance.truth, context(x), action(y))) {
          r.context = x;
          return fail(ErrorCode::kDemonstratorViolation,
                      "demonstrator puts mass on action " + std::to_string(y) + " outside the truth at context " +
                          std::to_string(x));
        }
      }
      if (sum != 1) return fail(ErrorCode::kInvalidArgument, "demonstrator row does not sum to 1");
    }
    if (d.kind == Kind::kSuboptimal && d.losses.size() != cls.size()) {
      return fail(ErrorCode::kDimensionMismatch, "suboptimal demonstrator needs one loss per hypothesis");
    }
  }
  if (d.kind == Kind::kAdaptive && !d.adaptive) return fail(ErrorCode::kInvalidArgument, "adaptive demonstrator without a script");
  return r;
}

ProblemInstance mle_failure_supp(std::size_t m, const Rational& gamma) {
  if (m == 0 || !(gamma > 0) || !(gamma < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "needs m >= 1 and 0 < gamma < 1");
  }
  const auto q = ceil(Rational(static_cast<long>(m)) / gamma).convert_to<std::size_t>();
  auto cls = std::make_shared<ModelClass>(q, 2);
  cls->add_member(constant_support(q, ActionSet(2, {0}), "sigma_0"));
  cls->add_member(constant_support(q, ActionSet(2, {0, 1}), "sigma_01"));
  ProblemInstance inst;
  inst.cls = std::move(cls);
  inst.distribution = ContextDistribution::uniform(q);
  inst.truth = 0;
  inst.provenance = "mle_failure_supp(m=" + std::to_string(m) + ",gamma=" + rational_label(gamma) + ")";
  return inst;
}

ProblemInstance mle_failure_unif(const Rational& gamma) {
  if (!(gamma > 0) || !(gamma < 1)) throw Error(ErrorCode::kInvalidArgument, "needs 0 < gamma < 1");
  const auto s = ceil(Rational(1) / gamma).convert_to<std::size_t>();
  const std::size_t ny = 2 * s;
  ActionSet small(ny);
  ActionSet large(ny, {0});
  for (std::size_t y = 0; y < s; ++y) small.insert(action(y));
  for (std::size_t y = s; y < ny; ++y) large.insert(action(y));
  auto cls = std::make_shared<ModelClass>(1, ny);
  cls->add_member(constant_support(1, small, "sigma_1"));
  cls->add_member(constant_support(1, large, "sigma_2"));
  ProblemInstance inst;
  inst.cls = std::move(cls);
  inst.distribution = ContextDistribution::point_mass(1, context(0));
  inst.truth = 1;
  inst.provenance = "mle_failure_unif(gamma=" + rational_label(gamma) + ")";
  return inst;
}

ProblemInstance majority_lb(std::size_t d) {
  if (d < 3) throw Error(ErrorCode::kInvalidArgument, "majority_lb needs d >= 3");
  const std::size_t q = (d - 1) / 2;
  auto cls = std::make_shared<ModelClass>(q, 2);
  for (std::size_t t = 0; t < q; ++t) {
    SupportFunction f = constant_support(q, ActionSet(2, {0, 1}), "");
    f.per_context[t] = ActionSet(2, {0});
    f.name = "anti_" + std::to_string(t) + "_a";
    cls->add_member(f);
    f.name = "anti_" + std::to_string(t) + "_b";
    cls->add_member(f);
  }
  if ((d - 1) % 2 == 1) cls->add_member(constant_support(q, ActionSet(2, {0, 1}), "neutral"));
  // Last, so the common-intersection fallback (lowest consistent index) lands on an anti voter.
  cls->add_member(constant_support(q, ActionSet(2, {1}), "truth"));
  ProblemInstance inst;
  inst.truth = cls->size() - 1;
  inst.cls = std::move(cls);
  inst.distribution = ContextDistribution::uniform(q);
  inst.provenance = "majority_lb(d=" + std::to_string(d) + ")";
  return inst;
}

ProblemInstance passk_lb_online(std::size_t k, std::size_t d, std::size_t cap) {
  if (k == 0 || d < 2) throw Error(ErrorCode::kInvalidArgument, "needs k >= 1 and d >= 2");
  const std::size_t nx = static_cast<std::size_t>(floor_log(d, k + 1));
  if (nx == 0) throw Error(ErrorCode::kInvalidArgument, "d < k+1 leaves no contexts");
  ProblemInstance inst;
  inst.cls = product_class(nx, k + 1, cap);
  inst.distribution = ContextDistribution::uniform(nx);
  inst.truth = 0;
  inst.demonstrator = DemonstratorSpec::adaptive_script(
      [](const AdaptiveView& v) {
        std::vector<bool> listed(v.cls->num_actions(), false);
        for (ActionId y : v.prediction) listed[index(y)] = true;
        for (std::size_t y = 0; y < listed.size(); ++y) {
          if (!listed[y]) return action(y);
        }
        return action(0);
      },
      "reveal_outside_list");
  inst.provenance = "passk_lb_online(k=" + std::to_string(k) + ",d=" + std::to_string(d) + ")";
  return inst;
}

ProblemInstance passk_lb_stat(std::size_t k, std::size_t q, std::size_t cap) {
  if (k == 0 || q == 0) throw Error(ErrorCode::kInvalidArgument, "needs k >= 1 and q >= 1");
  ProblemInstance inst;
  inst.cls = product_class(q, 2 * k, cap);
  inst.distribution = ContextDistribution::uniform(q);
  inst.truth = 0;
  inst.provenance = "passk_lb_stat(k=" + std::to_string(k) + ",q=" + std::to_string(q) + ")";
  return inst;
}

std::size_t product_index(std::span<const ActionId> actions, std::size_t num_actions) {
  std::size_t i = 0;
  for (ActionId y : actions) {
    if (index(y) >= num_actions) throw Error(ErrorCode::kIndexOutOfRange, "action outside product alphabet");
    i = i * num_actions + index(y);
  }
  return i;
}

ProblemInstance cloning_impossible(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "needs m >= 1");
  const std::size_t nx = 2 * m;
  auto cls = std::make_shared<ModelClass>(nx, 2);
  cls->add_member(constant_support(nx, ActionSet(2, {0, 1}), "both_correct"));
  ProblemInstance inst;
  inst.cls = std::move(cls);
  inst.distribution = ContextDistribution::uniform(nx);
  inst.truth = 0;
  inst.provenance = "cloning_impossible(m=" + std::to_string(m) + ")";
  return inst;
}

DemonstratorSpec suboptimal_demonstrator(const ModelClass& cls, std::size_t truth, const ContextDistribution& d,
                                         const Rational& off_mass) {
  if (off_mass < 0 || off_mass > 1) throw Error(ErrorCode::kInvalidArgument, "off-support mass outside [0,1]");
  const std::size_t nx = cls.num_contexts();
  const std::size_t ny = cls.num_actions();
  DemonstratorSpec spec;
  spec.kind = DemonstratorSpec::Kind::kSuboptimal;
  spec.label = "suboptimal(rho=" + to_string(off_mass) + ")";
  spec.table.assign(nx, std::vector<Rational>(ny, Rational(0)));
  const Rational spread = off_mass / static_cast<long>(ny);
  for (std::size_t x = 0; x < nx; ++x) {
    const ActionSetView s = cls.support(truth, context(x));
    const Rational on = (1 - off_mass) / static_cast<long>(s.count());
    for (std::size_t y = 0; y < ny; ++y) {
      spec.table[x][y] = spread + (s.contains(action(y)) ? on : Rational(0));
    }
  }
  spec.losses.reserve(cls.size());
  for (std::size_t h = 0; h < cls.size(); ++h) {
    Rational loss = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      Rational miss = 0;
      for (std::size_t y = 0; y < ny; ++y) {
        if (!cls.contains(h, context(x), action(y))) miss += spec.table[x][y];
      }
      loss += d[context(x)] * miss;
    }
    spec.losses.push_back(std::move(loss));
  }
  return spec;
}

ProblemInstance random_instance(const RandomInstanceOptions& o) {
  if (o.num_contexts == 0 || o.num_actions == 0 || o.num_hypotheses == 0) {
    throw Error(ErrorCode::kInvalidArgument, "random instance sizes must be positive");
  }
  if (!(o.density > 0) || o.density > 1) throw Error(ErrorCode::kInvalidArgument, "density outside (0,1]");
  SplitMix64 rng(o.seed);
  auto cls = std::make_shared<ModelClass>(o.num_contexts, o.num_actions);
  cls->reserve(o.num_hypotheses);
  SupportFunction f;
  f.per_context.assign(o.num_contexts, ActionSet(o.num_actions));
  for (std::size_t h = 0; h < o.num_hypotheses; ++h) {
    for (std::size_t x = 0; x < o.num_contexts; ++x) {
      ActionSet s(o.num_actions);
      while (s.empty()) {
        for (std::size_t y = 0; y < o.num_actions; ++y) {
          if (rng.bernoulli(o.density)) s.insert(action(y));
        }
      }
      f.per_context[x] = std::move(s);
    }
    f.name = "h" + std::to_string(h);
    cls->add_member(f);
  }
  ProblemInstance inst;
  inst.truth = rng.uniform_below(o.num_hypotheses);
  if (o.random_distribution) {
    std::vector<long> g(o.num_contexts);
    long total = 0;
    for (auto& v : g) {
      v = 1 + static_cast<long>(rng.uniform_below(64));
      total += v;
    }
    std::vector<Rational> p;
    for (long v : g) p.emplace_back(v, total);
    inst.distribution = ContextDistribution(std::move(p));
  } else {
    inst.distribution = ContextDistribution::uniform(o.num_contexts);
  }
  switch (o.demonstrator) {
    case DemonstratorSpec::Kind::kDeterministicMin: break;
    case DemonstratorSpec::Kind::kDeterministicMax: inst.demonstrator = DemonstratorSpec::deterministic_max(); break;
    case DemonstratorSpec::Kind::kUniformSupport: inst.demonstrator = DemonstratorSpec::uniform_support(); break;
    case DemonstratorSpec::Kind::kSuboptimal:
      inst.demonstrator = suboptimal_demonstrator(*cls, inst.truth, inst.distribution, o.off_mass);
      break;
    default: throw Error(ErrorCode::kInvalidArgument, "random instances support min, max, uniform or suboptimal demonstrators");
  }
  inst.cls = std::move(cls);
  inst.provenance = "random(X=" + std::to_string(o.num_contexts) + ",Y=" + std::to_string(o.num_actions) +
                    ",S=" + std::to_string(o.num_hypotheses) + ",density=" + to_string(o.density) +
                    ",seed=" + std::to_string(o.seed) + ")";
  return inst;
}

RewardClass random_reward_class(std::size_t num_contexts, std::size_t num_actions, std::size_t members,
                                std::uint64_t seed) {
  if (num_contexts == 0 || num_actions == 0 || members == 0) {
    throw Error(ErrorCode::kInvalidArgument, "reward class sizes must be positive");
  }
  SplitMix64 rng(seed);
  RewardClass rc;
  rc.num_contexts = num_contexts;
  rc.num_actions = num_actions;
  for (std::size_t i = 0; i < members; ++i) {
    std::vector<std::vector<Rational>> rows(num_contexts, std::vector<Rational>(num_actions));
    for (auto& row : rows) {
      for (auto& v : row) v = Rational(static_cast<long>(rng.uniform_below(5)), 4);
    }
    rc.members.emplace_back(rows, "r" + std::to_string(i));
  }
  return rc;
}

std::vector<CloningRow> cloning_report(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "needs m >= 1");
  if (m > 4) throw Error(ErrorCode::kInstanceTooLarge, "exact cloning report is limited to m <= 4");
  const std::size_t nx = 2 * m;
  const std::size_t demonstrators = std::size_t{1} << nx;
  std::size_t datasets = 1;
  for (std::size_t i = 0; i < m; ++i) datasets *= nx;
  const ProblemInstance inst = cloning_impossible(m);
  const SupportFunction truth = inst.truth_support();

  std::vector<CloningRow> rows;
  const std::vector<Rational> grid = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
  for (bool memorize : {false, true}) {
    for (const Rational& q : grid) {
      // Pr[estimator emits a] at an unseen context.
      const Rational p0 = q;
      const Rational p1 = 1 - q;
      Rational tv_sum = 0;
      double h2_sum = 0.0;
      Rational loss_sum = 0;
      for (std::size_t a = 0; a < demonstrators; ++a) {
        for (std::size_t ds = 0; ds < datasets; ++ds) {
          std::vector<bool> seen(nx, false);
          if (memorize) {
            std::size_t rest = ds;
            for (std::size_t i = 0; i < m; ++i) {
              seen[rest % nx] = true;
              rest /= nx;
            }
          }
          std::vector<std::vector<Rational>> table(nx, std::vector<Rational>(2));
          for (std::size_t x = 0; x < nx; ++x) {
            const std::size_t label = (a >> x) & 1U;
            Rational hit;
            if (seen[x]) {
              table[x][label] = 1;
              table[x][1 - label] = 0;
              hit = 1;
            } else {
              table[x][0] = p0;
              table[x][1] = p1;
              hit = label == 0 ? p0 : p1;
            }
            // TV(pi_hat(.|x), delta_label) = 1 - pi_hat(label|x).
            tv_sum += (1 - hit) / static_cast<long>(nx);
            h2_sum += (1.0 - std::sqrt(to_double(hit))) / static_cast<double>(nx);
          }
          loss_sum += loss_exact(table_policy(std::move(table)), inst.distribution, truth);
        }
      }
      const long runs = static_cast<long>(demonstrators * datasets);
      CloningRow row;
      row.estimator = std::string(memorize ? "memorize" : "constant") + "(q=" + to_string(q) + ")";
      row.mean_tv = tv_sum / runs;
      row.mean_hellinger2 = h2_sum / static_cast<double>(runs);
      row.loss = loss_sum / runs;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace answerlearn
