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

// Bidirectional codec for the system prompt that describes a home, and the
// chat document handed to inference backends.
//
// Canonical system prompt layout:
//
//   <preamble>\n
//   Services: a.b(), a.c(p1,p2)\n
//   Devices: a.x 'Friendly Name' = state; attr=value\n
//   a.y 'Other' = state
//
// With an empty preamble the text starts at "Services:".

#ifndef EDGEHA_PROMPT_CODEC_HPP_
#define EDGEHA_PROMPT_CODEC_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgeha/core_model.hpp"

namespace edgeha {

inline constexpr std::string_view kDefaultPreamble =
    "You are 'Al', a helpful AI Assistant that controls the devices in a house. "
    "Complete the following task as instructed or answer the following question "
    "with the information provided only.";

struct SystemContext {
  std::string preamble{kDefaultPreamble};
  ServiceCatalog catalog;
  DeviceRegistry registry;

  friend bool operator==(const SystemContext&, const SystemContext&) = default;
};

enum class CodecErrorKind {
  kEmptyContext,
  kUnrenderable,
  kMissingSection,
  kMalformedServiceList,
  kMalformedDeviceLine,
  kEmptyUtterance,
  kMalformedDocument,
};

std::string_view to_string(CodecErrorKind kind);

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrorKind kind, const std::string& message, std::size_t line = 0);

  CodecErrorKind kind() const { return kind_; }
  // 1-based line of the system text for kMalformedDeviceLine, else 0.
  std::size_t line() const { return line_; }

 private:
  CodecErrorKind kind_;
  std::size_t line_;
};

// Throws kEmptyContext for an empty catalog or registry, kUnrenderable for
// values that could not be parsed back (newlines in names, ';' in values).
std::string render_system_prompt(const SystemContext& ctx);
std::string render_device_line(const Device& device);

SystemContext parse_system_prompt(std::string_view text);

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

struct Turn {
  Role role;
  std::string value;

  friend bool operator==(const Turn&, const Turn&) = default;
};

// Ordered chat turns, serialized as [{"from": ..., "value": ...}, ...].
struct PromptDocument {
  std::vector<Turn> turns;

  std::string to_json() const;
  // Throws CodecError(kMalformedDocument).
  static PromptDocument from_json(std::string_view text);

  const Turn* find(Role role) const;

  friend bool operator==(const PromptDocument&, const PromptDocument&) = default;
};

// [(system, render_system_prompt(ctx)), (user, utterance)].
PromptDocument render_chat(const SystemContext& ctx, std::string_view utterance);

// Same shape, with a system text taken verbatim (dataset ingestion keeps
// the recorded whitespace).
PromptDocument make_chat(std::string system_text, std::string_view utterance);

}  // namespace edgeha

#endif  // EDGEHA_PROMPT_CODEC_HPP_
