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


#include "edgeha/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgeha/action_parser.hpp"

namespace edgeha {

namespace {

using nlohmann::json;

std::optional<PromptDocument> turns_from_json(const json& conversation, std::string* reason) {
  const json* turns = &conversation;
  if (conversation.is_object()) {
    auto it = conversation.find("conversations");
    if (it == conversation.end()) {
      *reason = "record object has no 'conversations' array";
      return std::nullopt;
    }
    turns = &*it;
  }
  if (!turns->is_array()) {
    *reason = "conversation is not an array of turns";
    return std::nullopt;
  }
  PromptDocument doc;
  for (const auto& turn : *turns) {
    if (!turn.is_object() || !turn.contains("from") || !turn.contains("value") ||
        !turn["from"].is_string() || !turn["value"].is_string()) {
      *reason = "each turn needs string 'from' and 'value'";
      return std::nullopt;
    }
    const auto& from = turn["from"].get_ref<const std::string&>();
    Role role;
    if (from == "system") {
      role = Role::kSystem;
    } else if (from == "user") {
      role = Role::kUser;
    } else if (from == "assistant") {
      role = Role::kAssistant;
    } else {
      *reason = "unknown role '" + from + "'";
      return std::nullopt;
    }
    doc.turns.push_back({role, turn["value"].get<std::string>()});
  }
  return doc;
}

bool is_turn_object(const json& j) { return j.is_object() && j.contains("from"); }

void add_record(Dataset& out, std::size_t index, const json& record) {
  std::string reason;
  const auto doc = turns_from_json(record, &reason);
  if (!doc) {
    out.quarantined.push_back({index, "SchemaViolation", reason});
    return;
  }
  SampleError error;
  if (auto sample = make_sample(*doc, &error)) {
    out.samples.push_back(std::move(*sample));
  } else {
    out.quarantined.push_back({index, error.error_class, error.reason});
  }
}

void add_document(Dataset& out, std::size_t& index, const json& doc) {
  if (doc.is_array() && !doc.empty() && is_turn_object(doc.front())) {
    add_record(out, index++, doc);
  } else if (doc.is_array()) {
    for (const auto& record : doc) add_record(out, index++, record);
  } else {
    add_record(out, index++, doc);
  }
}

}  // namespace

std::string_view to_string(DatasetErrorKind kind) {
  switch (kind) {
    case DatasetErrorKind::kUnreadableFile: return "UnreadableFile";
    case DatasetErrorKind::kSchemaViolation: return "SchemaViolation";
    case DatasetErrorKind::kUnwritableFile: return "UnwritableFile";
  }
  return "DatasetError";
}

DatasetError::DatasetError(DatasetErrorKind kind, const std::string& message,
                           std::optional<std::size_t> record)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      record_(record) {}

std::size_t Dataset::multi_intent_count() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.multi_intent() ? 1 : 0;
  return n;
}

std::optional<ConversationSample> make_sample(const PromptDocument& doc, SampleError* error) {
  const auto fail = [&](std::string error_class, std::string reason) {
    if (error) *error = {std::move(error_class), std::move(reason)};
    return std::nullopt;
  };
  const auto& t = doc.turns;
  if (t.size() != 3 || t[0].role != Role::kSystem || t[1].role != Role::kUser ||
      t[2].role != Role::kAssistant) {
    return fail("SchemaViolation", "expected system, user and assistant turns in that order");
  }
  ConversationSample s;
  s.system_text = t[0].value;
  s.user_text = t[1].value;
  s.gold_text = t[2].value;
  try {
    s.context = parse_system_prompt(s.system_text);
  } catch (const CodecError& e) {
    return fail(std::string(to_string(e.kind())), e.what());
  } catch (const ModelError& e) {
    return fail(std::string(to_string(e.kind())), e.what());
  }
  const auto out = parse_assistant_output(s.gold_text, s.context.catalog, s.context.registry);
  if (out.outcome != Outcome::kOk) {
    return fail(std::string(to_string(out.outcome)), out.detail);
  }
  s.gold_response = out.response_text;
  s.gold_action = {out.action->service.canonical(), out.action->target_device.str(),
                   out.action->params};
  s.class_label = out.action->service.canonical();
  s.block_count = out.block_count;
  return s;
}

Dataset parse_dataset(std::string_view text) {
  Dataset out;
  if (trim(text).empty()) return out;
  std::size_t index = 0;
  json whole = json::parse(text, nullptr, false);
  if (!whole.is_discarded()) {
    add_document(out, index, whole);
    return out;
  }
  // JSON Lines.
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    ++line_no;
    if (!line.empty()) {
      json doc = json::parse(line, nullptr, false);
      if (doc.is_discarded()) {
        throw DatasetError(DatasetErrorKind::kSchemaViolation,
                           "line " + std::to_string(line_no) + " is not JSON", index);
      }
      add_document(out, index, doc);
    }
    start = end + 1;
  }
  return out;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetErrorKind::kUnreadableFile, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DatasetError(DatasetErrorKind::kUnreadableFile, "read failed: " + path);
  return parse_dataset(buffer.str());
}

std::string dump_corpus(std::span<const ConversationSample> samples) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    doc.push_back(nlohmann::ordered_json::array({
        {{"from", "system"}, {"value", s.system_text}},
        {{"from", "user"}, {"value", s.user_text}},
        {{"from", "assistant"}, {"value", s.gold_text}},
    }));
  }
  return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

void export_training_corpus(std::span<const ConversationSample> samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(DatasetErrorKind::kUnwritableFile, "cannot open '" + path + "'");
  out << dump_corpus(samples);
  out.flush();
  if (!out) throw DatasetError(DatasetErrorKind::kUnwritableFile, "write failed: " + path);
}

std::vector<std::string> class_labels(std::span<const ConversationSample> samples) {
  std::vector<std::string> labels;
  std::set<std::string, std::less<>> seen;
  for (const auto& s : samples) {
    if (seen.insert(s.class_label).second) labels.push_back(s.class_label);
  }
  return labels;
}

}  // namespace edgeha
