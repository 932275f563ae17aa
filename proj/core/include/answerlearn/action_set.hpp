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

#ifndef ANSWERLEARN_ACTION_SET_HPP_
#define ANSWERLEARN_ACTION_SET_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "answerlearn/common.hpp"

namespace answerlearn {

inline constexpr std::size_t kBitsPerWord = 64;

constexpr std::size_t words_for(std::size_t num_actions) {
  return (num_actions + kBitsPerWord - 1) / kBitsPerWord;
}

// Read-only view over the bit words of a subset of {0, ..., num_actions-1}.
class ActionSetView {
 public:
  ActionSetView(std::span<const std::uint64_t> words, std::size_t num_actions)
      : words_(words), num_actions_(num_actions) {}

  std::size_t num_actions() const { return num_actions_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool contains(ActionId y) const {
    const std::size_t i = index(y);
    return (words_[i / kBitsPerWord] >> (i % kBitsPerWord)) & 1U;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const {
    for (std::uint64_t w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  std::optional<ActionId> min() const;
  std::optional<ActionId> max() const;

  bool intersects(ActionSetView other) const;
  bool subset_of(ActionSetView other) const;

  // Calls f(ActionId) for every member in increasing order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        f(action(w * kBitsPerWord + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<ActionId> to_vector() const;

  friend bool operator==(ActionSetView a, ActionSetView b);

 private:
  std::span<const std::uint64_t> words_;
  std::size_t num_actions_;
};

// Owning fixed-width bit vector over an explicitly enumerated action space.
class ActionSet {
 public:
  using Storage = boost::container::small_vector<std::uint64_t, 2>;

  explicit ActionSet(std::size_t num_actions = 0)
      : bits_(words_for(num_actions), 0), num_actions_(num_actions) {}
  ActionSet(std::size_t num_actions, std::initializer_list<std::size_t> members);
  explicit ActionSet(ActionSetView view);

  static ActionSet full(std::size_t num_actions);
  static ActionSet from_indices(std::size_t num_actions, std::span<const std::size_t> members);

  ActionSetView view() const { return {std::span(bits_.data(), bits_.size()), num_actions_}; }
  operator ActionSetView() const { return view(); }  // NOLINT(google-explicit-constructor)

  std::size_t num_actions() const { return num_actions_; }
  bool contains(ActionId y) const { return view().contains(y); }
  std::size_t count() const { return view().count(); }
  bool empty() const { return view().empty(); }
  std::optional<ActionId> min() const { return view().min(); }
  std::optional<ActionId> max() const { return view().max(); }
  std::vector<ActionId> to_vector() const { return view().to_vector(); }

  void insert(ActionId y);
  void erase(ActionId y);

  ActionSet& operator|=(ActionSetView other);
  ActionSet& operator&=(ActionSetView other);
  ActionSet& operator-=(ActionSetView other);

  friend ActionSet operator|(ActionSet a, ActionSetView b) { return a |= b; }
  friend ActionSet operator&(ActionSet a, ActionSetView b) { return a &= b; }
  friend ActionSet operator-(ActionSet a, ActionSetView b) { return a -= b; }
  friend bool operator==(const ActionSet& a, const ActionSet& b) { return a.view() == b.view(); }

  const Storage& storage() const { return bits_; }

 private:
  void check(ActionId y) const;
  void require_same_width(ActionSetView other) const;

  Storage bits_;
  std::size_t num_actions_;
};

}  // namespace answerlearn

#endif  // ANSWERLEARN_ACTION_SET_HPP_
