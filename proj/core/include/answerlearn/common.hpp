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

#ifndef ANSWERLEARN_COMMON_HPP_
#define ANSWERLEARN_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace answerlearn {

// Strong index types. Valid only relative to a declared space size.
enum class ContextId : std::uint32_t {};
enum class ActionId : std::uint32_t {};

constexpr std::size_t index(ContextId x) { return static_cast<std::size_t>(x); }
constexpr std::size_t index(ActionId y) { return static_cast<std::size_t>(y); }
constexpr ContextId context(std::size_t i) { return static_cast<ContextId>(i); }
constexpr ActionId action(std::size_t i) { return static_cast<ActionId>(i); }

enum class ErrorCode {
  kEmptySupport,
  kDimensionMismatch,
  kIndexOutOfRange,
  kInexactPolicy,
  kInvalidHyperparams,
  kBoundViolated,
  kEmptyVersionSpace,
  kInstanceTooLarge,
  kAdaptiveNotSamplable,
  kDemonstratorViolation,
  kConfigError,
  kParseError,
  kInvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace answerlearn

#endif  // ANSWERLEARN_COMMON_HPP_
