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

#include "answerlearn/model_class.hpp"

#include <algorithm>
#include <string>

namespace answerlearn {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

ModelClass::ModelClass(std::size_t num_contexts, std::size_t num_actions)
    : num_contexts_(num_contexts), num_actions_(num_actions), words_(words_for(num_actions)) {
  if (num_contexts == 0 || num_actions == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "|X| and |Y| must be at least 1");
  }
}

ModelClass::ModelClass(std::size_t num_contexts, std::size_t num_actions,
                       const std::vector<SupportFunction>& members)
    : ModelClass(num_contexts, num_actions) {
  reserve(members.size());
  for (const auto& m : members) add_member(m);
}

void ModelClass::add_member(const SupportFunction& member) {
  if (member.per_context.size() != num_contexts_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "member has " + std::to_string(member.per_context.size()) + " contexts, class has " +
                    std::to_string(num_contexts_));
  }
  for (const auto& s : member.per_context) {
    if (s.num_actions() != num_actions_) {
      throw Error(ErrorCode::kDimensionMismatch, "member action space differs from class");
    }
  }
  for (const auto& s : member.per_context) {
    bits_.insert(bits_.end(), s.storage().begin(), s.storage().end());
  }
  names_.push_back(member.name);
}

void ModelClass::reserve(std::size_t members) {
  bits_.reserve(members * num_contexts_ * words_);
  names_.reserve(members);
}

SupportFunction ModelClass::member(std::size_t h) const {
  if (h >= size()) throw Error(ErrorCode::kIndexOutOfRange, "hypothesis " + std::to_string(h));
  SupportFunction f;
  f.name = names_[h];
  f.per_context.reserve(num_contexts_);
  for (std::size_t x = 0; x < num_contexts_; ++x) f.per_context.emplace_back(support(h, context(x)));
  return f;
}

std::uint64_t ModelClass::content_hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, num_contexts_);
  fnv_mix(h, num_actions_);
  fnv_mix(h, size());
  for (std::uint64_t w : bits_) fnv_mix(h, w);
  return h;
}

RewardFunction::RewardFunction(std::size_t num_contexts, std::size_t num_actions)
    : num_contexts_(num_contexts), num_actions_(num_actions), table_(num_contexts * num_actions) {}

RewardFunction::RewardFunction(const std::vector<std::vector<Rational>>& rows, std::string name)
    : num_contexts_(rows.size()), num_actions_(rows.empty() ? 0 : rows.front().size()), name_(std::move(name)) {
  if (num_contexts_ == 0 || num_actions_ == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "reward table must be non-empty");
  }
  table_.reserve(num_contexts_ * num_actions_);
  for (const auto& row : rows) {
    if (row.size() != num_actions_) throw Error(ErrorCode::kDimensionMismatch, "ragged reward rows");
    for (const auto& v : row) {
      if (v < 0 || v > 1) throw Error(ErrorCode::kInvalidArgument, "reward " + to_string(v) + " outside [0,1]");
      table_.push_back(v);
    }
  }
}

void RewardFunction::set(ContextId x, ActionId y, Rational value) {
  if (index(x) >= num_contexts_ || index(y) >= num_actions_) {
    throw Error(ErrorCode::kIndexOutOfRange, "reward index");
  }
  if (value < 0 || value > 1) throw Error(ErrorCode::kInvalidArgument, "reward outside [0,1]");
  table_[index(x) * num_actions_ + index(y)] = std::move(value);
}

const Rational& RewardFunction::row_max(ContextId x) const {
  auto begin = table_.begin() + static_cast<std::ptrdiff_t>(index(x) * num_actions_);
  return *std::max_element(begin, begin + static_cast<std::ptrdiff_t>(num_actions_));
}

ValidationResult validate_class(const ModelClass& cls) {
  ValidationResult result;
  if (cls.size() == 0) {
    result.ok = false;
    result.code = ErrorCode::kDimensionMismatch;
    result.message = "class has no members";
    return result;
  }
  for (std::size_t h = 0; h < cls.size(); ++h) {
    for (std::size_t x = 0; x < cls.num_contexts(); ++x) {
      if (cls.support(h, context(x)).empty()) {
        result.ok = false;
        result.code = ErrorCode::kEmptySupport;
        result.hypothesis = h;
        result.context = x;
        result.message = "hypothesis " + std::to_string(h) + " has empty support at context " + std::to_string(x);
        return result;
      }
    }
  }
  return result;
}

void require_valid(const ModelClass& cls) {
  ValidationResult r = validate_class(cls);
  if (!r) throw Error(r.code, r.message);
}

void require_in_range(const ModelClass& cls, const Dataset& data) {
  for (const auto& [x, y] : data) {
    if (index(x) >= cls.num_contexts() || index(y) >= cls.num_actions()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "pair (" + std::to_string(index(x)) + ", " + std::to_string(index(y)) + ") out of range");
    }
  }
}

SupportFunction support_of_reward(const RewardFunction& r) {
  SupportFunction f;
  f.name = r.name();
  f.per_context.reserve(r.num_contexts());
  for (std::size_t x = 0; x < r.num_contexts(); ++x) {
    const Rational& best = r.row_max(context(x));
    ActionSet s(r.num_actions());
    for (std::size_t y = 0; y < r.num_actions(); ++y) {
      if (r(context(x), action(y)) == best) s.insert(action(y));
    }
    f.per_context.push_back(std::move(s));
  }
  return f;
}

ModelClass reward_class_to_model_class(const RewardClass& rewards) {
  if (rewards.members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty reward class");
  ModelClass cls(rewards.num_contexts, rewards.num_actions);
  std::vector<SupportFunction> seen;
  for (const auto& r : rewards.members) {
    SupportFunction f = support_of_reward(r);
    if (std::find(seen.begin(), seen.end(), f) != seen.end()) continue;
    cls.add_member(f);
    seen.push_back(std::move(f));
  }
  return cls;
}

std::vector<std::size_t> consistent_set(const ModelClass& cls, const Dataset& data) {
  require_in_range(cls, data);
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < cls.size(); ++h) {
    bool ok = std::all_of(data.begin(), data.end(),
                          [&](const Demonstration& d) { return cls.contains(h, d.x, d.y); });
    if (ok) out.push_back(h);
  }
  return out;
}

VersionSpace::VersionSpace(const ModelClass& cls) : cls_(&cls), alive_(cls.size(), true), count_(cls.size()) {}

void VersionSpace::observe(ContextId x, ActionId y) {
  for (std::size_t h = 0; h < alive_.size(); ++h) {
    if (alive_[h] && !cls_->contains(h, x, y)) {
      alive_[h] = false;
      --count_;
    }
  }
}

std::vector<std::size_t> VersionSpace::members() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t h = 0; h < alive_.size(); ++h) {
    if (alive_[h]) out.push_back(h);
  }
  return out;
}

}  // namespace answerlearn
