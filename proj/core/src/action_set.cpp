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

#include "answerlearn/action_set.hpp"

#include <string>

namespace answerlearn {

std::optional<ActionId> ActionSetView::min() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return action(w * kBitsPerWord + static_cast<std::size_t>(std::countr_zero(words_[w])));
  }
  return std::nullopt;
}

std::optional<ActionId> ActionSetView::max() const {
  for (std::size_t w = words_.size(); w-- > 0;) {
    if (words_[w] != 0) {
      return action(w * kBitsPerWord + kBitsPerWord - 1 - static_cast<std::size_t>(std::countl_zero(words_[w])));
    }
  }
  return std::nullopt;
}

bool ActionSetView::intersects(ActionSetView other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & other.words_[w]) != 0) return true;
  }
  return false;
}

bool ActionSetView::subset_of(ActionSetView other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

std::vector<ActionId> ActionSetView::to_vector() const {
  std::vector<ActionId> out;
  out.reserve(count());
  for_each([&](ActionId y) { out.push_back(y); });
  return out;
}

bool operator==(ActionSetView a, ActionSetView b) {
  if (a.num_actions_ != b.num_actions_) return false;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    if (a.words_[w] != b.words_[w]) return false;
  }
  return true;
}

ActionSet::ActionSet(std::size_t num_actions, std::initializer_list<std::size_t> members)
    : ActionSet(num_actions) {
  for (std::size_t i : members) insert(action(i));
}

ActionSet::ActionSet(ActionSetView view)
    : bits_(view.words().begin(), view.words().end()), num_actions_(view.num_actions()) {}

ActionSet ActionSet::full(std::size_t num_actions) {
  ActionSet s(num_actions);
  for (std::size_t i = 0; i < num_actions; ++i) s.insert(action(i));
  return s;
}

ActionSet ActionSet::from_indices(std::size_t num_actions, std::span<const std::size_t> members) {
  ActionSet s(num_actions);
  for (std::size_t i : members) s.insert(action(i));
  return s;
}

void ActionSet::insert(ActionId y) {
  check(y);
  bits_[index(y) / kBitsPerWord] |= std::uint64_t{1} << (index(y) % kBitsPerWord);
}

void ActionSet::erase(ActionId y) {
  check(y);
  bits_[index(y) / kBitsPerWord] &= ~(std::uint64_t{1} << (index(y) % kBitsPerWord));
}

ActionSet& ActionSet::operator|=(ActionSetView other) {
  require_same_width(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= other.words()[w];
  return *this;
}

ActionSet& ActionSet::operator&=(ActionSetView other) {
  require_same_width(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= other.words()[w];
  return *this;
}

ActionSet& ActionSet::operator-=(ActionSetView other) {
  require_same_width(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= ~other.words()[w];
  return *this;
}

void ActionSet::check(ActionId y) const {
  if (index(y) >= num_actions_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "action " + std::to_string(index(y)) + " outside |Y|=" + std::to_string(num_actions_));
  }
}

void ActionSet::require_same_width(ActionSetView other) const {
  if (other.num_actions() != num_actions_) {
    throw Error(ErrorCode::kDimensionMismatch, "action sets over different spaces");
  }
}

}  // namespace answerlearn
