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


// Conversation records in the three-turn `from`/`value` JSON shape: loading
// with per-record quarantine, and export for external fine-tuning.

#ifndef EDGEHA_DATASET_HPP_
#define EDGEHA_DATASET_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgeha/core_model.hpp"
#include "edgeha/prompt_codec.hpp"

namespace edgeha {

struct ConversationSample {
  std::string system_text;
  std::string user_text;
  // Assistant text outside the action fence.
  std::string gold_response;
  // Canonical service, device and params of the first action block.
  RawAction gold_action;
  // Canonical service name.
  std::string class_label;
  // The assistant turn exactly as recorded.
  std::string gold_text;
  std::size_t block_count = 1;
  // Parsed system turn.
  SystemContext context;

  bool multi_intent() const { return block_count > 1; }
  PromptDocument prompt() const { return make_chat(system_text, user_text); }

  friend bool operator==(const ConversationSample&, const ConversationSample&) = default;
};

enum class DatasetErrorKind { kUnreadableFile, kSchemaViolation, kUnwritableFile };

std::string_view to_string(DatasetErrorKind kind);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(DatasetErrorKind kind, const std::string& message,
               std::optional<std::size_t> record = std::nullopt);
  DatasetErrorKind kind() const { return kind_; }
  std::optional<std::size_t> record() const { return record_; }

 private:
  DatasetErrorKind kind_;
  std::optional<std::size_t> record_;
};

struct QuarantinedRecord {
  std::size_t index = 0;
  // "SchemaViolation", a codec or model error name, or a parse outcome.
  std::string error_class;
  std::string reason;
};

struct Dataset {
  std::vector<ConversationSample> samples;
  std::vector<QuarantinedRecord> quarantined;

  std::size_t multi_intent_count() const;
};

struct SampleError {
  std::string error_class;
  std::string reason;
};

// Builds one sample from a system, user, assistant turn triple, or reports
// why the record is quarantined through `error`.
std::optional<ConversationSample> make_sample(const PromptDocument& turns, SampleError* error);

// Accepts a JSON array of conversations (each an array of turns or an object
// with a `conversations` array), a single conversation, or JSON Lines of
// either. Blank input yields an empty dataset. Throws kSchemaViolation only
// when the text is not JSON at all.
Dataset parse_dataset(std::string_view text);

// Throws kUnreadableFile, or kSchemaViolation as above.
Dataset load_dataset(const std::string& path);

// JSON array of three-turn conversations. Loading the output reproduces the
// samples exactly.
std::string dump_corpus(std::span<const ConversationSample> samples);

// Throws kUnwritableFile.
void export_training_corpus(std::span<const ConversationSample> samples, const std::string& path);

// Unique class labels in first-seen order.
std::vector<std::string> class_labels(std::span<const ConversationSample> samples);

}  // namespace edgeha

#endif  // EDGEHA_DATASET_HPP_
