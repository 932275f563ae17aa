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

#include "answerlearn/common.hpp"

namespace answerlearn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInexactPolicy: return "InexactPolicy";
    case ErrorCode::kInvalidHyperparams: return "InvalidHyperparams";
    case ErrorCode::kBoundViolated: return "BoundViolated";
    case ErrorCode::kEmptyVersionSpace: return "EmptyVersionSpace";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kAdaptiveNotSamplable: return "AdaptiveNotSamplable";
    case ErrorCode::kDemonstratorViolation: return "DemonstratorViolation";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace answerlearn
