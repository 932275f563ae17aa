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

#ifndef ANSWERLEARN_MODEL_CLASS_HPP_
#define ANSWERLEARN_MODEL_CLASS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "answerlearn/action_set.hpp"
#include "answerlearn/common.hpp"
#include "answerlearn/rational.hpp"

namespace answerlearn {

// A support function maps each context to its set of correct actions.
struct SupportFunction {
  std::vector<ActionSet> per_context;
  std::string name;

  std::size_t num_contexts() const { return per_context.size(); }
  const ActionSet& operator()(ContextId x) const { return per_context.at(index(x)); }

  friend bool operator==(const SupportFunction& a, const SupportFunction& b) {
    return a.per_context == b.per_context;
  }
};

// Finite family of support functions over |X| contexts and |Y| actions,
// stored as one flat |S| x |X| array of action bitsets. Member position is
// the canonical hypothesis index.
class ModelClass {
 public:
  ModelClass(std::size_t num_contexts, std::size_t num_actions);
  ModelClass(std::size_t num_contexts, std::size_t num_actions,
             const std::vector<SupportFunction>& members);

  // Throws kDimensionMismatch when the member's shape differs.
  void add_member(const SupportFunction& member);
  void reserve(std::size_t members);

  std::size_t size() const { return names_.size(); }
  std::size_t num_contexts() const { return num_contexts_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t words_per_set() const { return words_; }

  ActionSetView support(std::size_t h, ContextId x) const {
    const std::size_t offset = (h * num_contexts_ + index(x)) * words_;
    return {std::span(bits_.data() + offset, words_), num_actions_};
  }
  bool contains(std::size_t h, ContextId x, ActionId y) const { return support(h, x).contains(y); }

  SupportFunction member(std::size_t h) const;
  const std::string& name(std::size_t h) const { return names_.at(h); }

  // FNV-1a over dimensions and bit contents (names excluded).
  std::uint64_t content_hash() const;

  friend bool operator==(const ModelClass& a, const ModelClass& b) {
    return a.num_contexts_ == b.num_contexts_ && a.num_actions_ == b.num_actions_ &&
           a.bits_ == b.bits_;
  }

 private:
  std::size_t num_contexts_;
  std::size_t num_actions_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::string> names_;
};

// Reward table r(x, y) with exact rational entries in [0, 1].
class RewardFunction {
 public:
  RewardFunction(std::size_t num_contexts, std::size_t num_actions);
  // Throws kInvalidArgument for entries outside [0, 1] or ragged rows.
  explicit RewardFunction(const std::vector<std::vector<Rational>>& rows, std::string name = {});

  std::size_t num_contexts() const { return num_contexts_; }
  std::size_t num_actions() const { return num_actions_; }
  const Rational& operator()(ContextId x, ActionId y) const {
    return table_[index(x) * num_actions_ + index(y)];
  }
  void set(ContextId x, ActionId y, Rational value);
  const std::string& name() const { return name_; }

  // max_y r(x, y)
  const Rational& row_max(ContextId x) const;

 private:
  std::size_t num_contexts_;
  std::size_t num_actions_;
  std::vector<Rational> table_;
  std::string name_;
};

struct RewardClass {
  std::size_t num_contexts = 0;
  std::size_t num_actions = 0;
  std::vector<RewardFunction> members;
};

struct Demonstration {
  ContextId x;
  ActionId y;

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

// Ordered training set; online replays consume it in order.
using Dataset = std::vector<Demonstration>;

struct ValidationResult {
  bool ok = true;
  ErrorCode code = ErrorCode::kEmptySupport;
  std::size_t hypothesis = 0;
  std::size_t context = 0;
  std::string message;

  explicit operator bool() const { return ok; }
};

ValidationResult validate_class(const ModelClass& cls);
// Throws the error that validate_class would report.
void require_valid(const ModelClass& cls);

void require_in_range(const ModelClass& cls, const Dataset& data);

SupportFunction support_of_reward(const RewardFunction& r);

// Supports of every member with exact duplicates removed (first occurrence wins).
ModelClass reward_class_to_model_class(const RewardClass& rewards);

// Indices of hypotheses consistent with every pair, in canonical order.
std::vector<std::size_t> consistent_set(const ModelClass& cls, const Dataset& data);

// Incrementally maintained version space.
class VersionSpace {
 public:
  explicit VersionSpace(const ModelClass& cls);

  void observe(ContextId x, ActionId y);
  bool alive(std::size_t h) const { return alive_[h]; }
  std::size_t alive_count() const { return count_; }
  std::vector<std::size_t> members() const;

 private:
  const ModelClass* cls_;
  std::vector<bool> alive_;
  std::size_t count_;
};

}  // namespace answerlearn

#endif  // ANSWERLEARN_MODEL_CLASS_HPP_
