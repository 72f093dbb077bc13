// Copyright 2026 The edgeha Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Splits raw assistant text into the spoken response and the fenced
// ```homeassistant action block, parses the block as strict JSON and
// validates the call against a home.

#ifndef EDGEHA_ACTION_PARSER_HPP_
#define EDGEHA_ACTION_PARSER_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "edgeha/core_model.hpp"

namespace edgeha {

inline constexpr std::string_view kActionFenceOpen = "```homeassistant";
inline constexpr std::string_view kFence = "```";

enum class ParseErrorKind { kUnterminatedFence, kMalformedJson, kMissingField };

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& message);
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

struct ActionBlockSplit {
  // Text outside every action fence, trimmed.
  std::string response_text;
  // Body of the first action fence.
  std::optional<std::string> block;
  // Total number of action fences seen, including ignored later ones.
  std::size_t block_count = 0;
};

// Throws ParseError(kUnterminatedFence) when the first action fence is
// never closed. Later unterminated fences are dropped.
ActionBlockSplit extract_action_block(std::string_view raw);

// Strict JSON: one object, no duplicate keys, `service` plus one of
// `target_device` / `device` (equal when both are present). Every other key
// becomes a parameter and must hold a string or number.
RawAction parse_action_json(std::string_view block);

enum class Outcome {
  kOk,
  kNoActionBlock,
  kMalformedJson,
  kMissingField,
  kUnknownService,
  kUnknownDevice,
  kDomainMismatch,
  kMissingParam,
  kUnexpectedParam,
};

std::string_view to_string(Outcome outcome);
Outcome outcome_for(ValidationErrorKind kind);

struct AssistantOutput {
  std::string response_text;
  std::optional<ActionCall> action;
  Outcome outcome = Outcome::kNoActionBlock;
  // Human-readable reason for a non-Ok outcome.
  std::string detail;
  // Action fences seen; anything beyond the first is ignored.
  std::size_t block_count = 0;
  // Fields as parsed, kept when validation fails.
  std::optional<RawAction> raw_action;
};

// Total over all inputs: every failure is reported through `outcome`.
// An unterminated first fence is reported as kNoActionBlock.
AssistantOutput parse_assistant_output(std::string_view raw, const ServiceCatalog& catalog,
                                       const DeviceRegistry& registry);

// Canonical assistant text: `<response>\n```homeassistant\n<json>\n```` with
// keys `service`, `target_device` and then parameters.
std::string format_assistant_text(std::string_view response_text, const RawAction& action,
                                  std::string_view device_key = "target_device");

}  // namespace edgeha

#endif  // EDGEHA_ACTION_PARSER_HPP_
