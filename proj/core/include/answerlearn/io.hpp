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

#ifndef ANSWERLEARN_IO_HPP_
#define ANSWERLEARN_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "answerlearn/batch.hpp"
#include "answerlearn/instances.hpp"
#include "answerlearn/mle.hpp"
#include "answerlearn/model_class.hpp"
#include "answerlearn/policy.hpp"
#include "answerlearn/sim.hpp"

namespace answerlearn {

using Json = nlohmann::json;

// Parse errors throw kParseError; shape errors throw kDimensionMismatch or
// kEmptySupport as validation would.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

Json to_json(const ModelClass& cls);
ModelClass model_class_from_json(const Json& doc);

Json to_json(const RewardClass& rewards);
RewardClass reward_class_from_json(const Json& doc);

// Exact numbers: integers, "p/q" strings, or decimals read by shortest round trip.
Rational rational_from_json(const Json& value);

Json to_json(const ContextDistribution& d);
Json to_json(const DemonstratorSpec& spec);
DemonstratorSpec demonstrator_from_json(const Json& doc, std::size_t num_contexts,
                                        std::size_t num_actions);

Json to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const Json& doc);

Json to_json(const Policy& policy);
Json to_json(const MleReport& report);

// Header {class_hash, alpha, beta, k, boost, m} plus per-round counter arrays.
Json snapshots_to_json(const SnapshotMixture& mixture);

// Line-delimited trace: one header line, then one record per round.
void write_transcript(std::ostream& out, const RunRecord& record);
Json round_to_json(const RoundRecord& round, bool list_output);

}  // namespace answerlearn

#endif  // ANSWERLEARN_IO_HPP_
