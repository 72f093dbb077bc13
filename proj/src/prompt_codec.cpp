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

#include "edgeha/prompt_codec.hpp"

#include <json.hpp>

namespace edgeha {

namespace {

constexpr std::string_view kServicesMarker = "Services:";
constexpr std::string_view kDevicesMarker = "Devices:";

bool is_attr_value(std::string_view text) {
  if (text.empty() || trim(text).size() != text.size()) return false;
  return text.find_first_of(";\n\r") == std::string_view::npos;
}

// Finds `marker` at the start of the text or of a line.
std::size_t find_marker(std::string_view text, std::string_view marker, std::size_t from = 0) {
  for (std::size_t pos = text.find(marker, from); pos != std::string_view::npos;
       pos = text.find(marker, pos + 1)) {
    if (pos == 0 || text[pos - 1] == '\n') return pos;
  }
  return std::string_view::npos;
}

std::vector<ServiceSignature> parse_service_list(std::string_view list) {
  std::vector<ServiceSignature> out;
  std::size_t pos = 0;
  const auto fail = [&](const std::string& why) {
    throw CodecError(CodecErrorKind::kMalformedServiceList,
                     why + " at offset " + std::to_string(pos) + " of service list");
  };
  while (true) {
    while (pos < list.size() && list[pos] == ' ') ++pos;
    if (pos >= list.size()) fail("expected a service");
    const auto close = list.find(')', pos);
    if (close == std::string_view::npos || list.find('(', pos) > close) {
      fail("expected '<domain>.<name>(...)'");
    }
    try {
      out.push_back(ServiceSignature::parse(list.substr(pos, close + 1 - pos)));
    } catch (const ModelError& e) {
      fail(e.what());
    }
    pos = close + 1;
    while (pos < list.size() && list[pos] == ' ') ++pos;
    if (pos == list.size()) break;
    if (list[pos] != ',') fail("expected ',' between services");
    ++pos;
  }
  return out;
}

Device parse_device_line(std::string_view line, std::size_t line_no) {
  const auto fail = [&](const std::string& why) -> Device {
    throw CodecError(CodecErrorKind::kMalformedDeviceLine,
                     "device line " + std::to_string(line_no) + ": " + why, line_no);
  };

  const auto space = line.find(' ');
  if (space == std::string_view::npos) return fail("expected \"<id> '<name>' = <state>\"");
  Device device;
  try {
    device.id = parse_entity_id(line.substr(0, space));
  } catch (const ModelError& e) {
    return fail(e.what());
  }

  std::size_t pos = space;
  while (pos < line.size() && line[pos] == ' ') ++pos;
  if (pos >= line.size() || line[pos] != '\'') return fail("expected quoted friendly name");
  const std::size_t name_begin = pos + 1;

  // The name ends at the first quote followed by optional spaces and '='.
  std::size_t name_end = std::string_view::npos;
  std::size_t eq = std::string_view::npos;
  for (std::size_t q = line.find('\'', name_begin); q != std::string_view::npos;
       q = line.find('\'', q + 1)) {
    std::size_t k = q + 1;
    while (k < line.size() && line[k] == ' ') ++k;
    if (k < line.size() && line[k] == '=') {
      name_end = q;
      eq = k;
      break;
    }
  }
  if (name_end == std::string_view::npos) return fail("missing \"' = <state>\"");
  device.friendly_name = std::string(line.substr(name_begin, name_end - name_begin));

  std::vector<std::string_view> segments;
  std::string_view rest = line.substr(eq + 1);
  for (auto semi = rest.find(';'); semi != std::string_view::npos; semi = rest.find(';')) {
    segments.push_back(rest.substr(0, semi));
    rest = rest.substr(semi + 1);
  }
  segments.push_back(rest);

  device.state.primary_state = std::string(trim(segments.front()));
  if (device.state.primary_state.empty()) return fail("empty state");
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const std::string_view segment = trim(segments[i]);
    const auto assign = segment.find('=');
    if (assign == std::string_view::npos) {
      return fail("attribute without '=': '" + std::string(segment) + "'");
    }
    const std::string_view key = trim(segment.substr(0, assign));
    const std::string_view value = trim(segment.substr(assign + 1));
    if (!is_token(key)) return fail("bad attribute name '" + std::string(key) + "'");
    if (value.empty()) return fail("empty value for attribute '" + std::string(key) + "'");
    if (device.state.attributes.find(key)) {
      return fail("duplicate attribute '" + std::string(key) + "'");
    }
    device.state.attributes.set(std::string(key), parse_scalar(value));
  }
  try {
    check_state(device.id.domain(), device.state);
  } catch (const ModelError& e) {
    return fail(e.what());
  }
  return device;
}

}  // namespace

std::string_view to_string(CodecErrorKind kind) {
  switch (kind) {
    case CodecErrorKind::kEmptyContext: return "EmptyContext";
    case CodecErrorKind::kUnrenderable: return "Unrenderable";
    case CodecErrorKind::kMissingSection: return "MissingSection";
    case CodecErrorKind::kMalformedServiceList: return "MalformedServiceList";
    case CodecErrorKind::kMalformedDeviceLine: return "MalformedDeviceLine";
    case CodecErrorKind::kEmptyUtterance: return "EmptyUtterance";
    case CodecErrorKind::kMalformedDocument: return "MalformedDocument";
  }
  return "CodecError";
}

CodecError::CodecError(CodecErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), line_(line) {}

std::string render_device_line(const Device& device) {
  const std::string& name = device.friendly_name;
  if (name.find_first_of("\n\r") != std::string::npos) {
    throw CodecError(CodecErrorKind::kUnrenderable, "newline in friendly name of " +
                                                        device.id.str());
  }
  for (std::size_t q = name.find('\''); q != std::string::npos; q = name.find('\'', q + 1)) {
    const auto k = name.find_first_not_of(' ', q + 1);
    if (k != std::string::npos && name[k] == '=') {
      throw CodecError(CodecErrorKind::kUnrenderable,
                       "friendly name of " + device.id.str() + " contains \"'=\"");
    }
  }
  std::string line = device.id.str() + " '" + name + "' = " + device.state.primary_state;
  for (const auto& [key, value] : device.state.attributes) {
    const std::string text = format_scalar(value);
    if (!is_token(key) || !is_attr_value(text) ||
        (std::holds_alternative<std::string>(value) &&
         !std::holds_alternative<std::string>(parse_scalar(text)))) {
      throw CodecError(CodecErrorKind::kUnrenderable,
                       "attribute " + key + " of " + device.id.str() + " cannot round-trip");
    }
    line += "; " + key + "=" + text;
  }
  return line;
}

std::string render_system_prompt(const SystemContext& ctx) {
  if (ctx.catalog.empty() || ctx.registry.empty()) {
    throw CodecError(CodecErrorKind::kEmptyContext,
                     "system prompt needs at least one service and one device");
  }
  if (find_marker(ctx.preamble, kServicesMarker) != std::string::npos ||
      find_marker(ctx.preamble, kDevicesMarker) != std::string::npos) {
    throw CodecError(CodecErrorKind::kUnrenderable, "preamble contains a section marker");
  }
  std::string out;
  if (!ctx.preamble.empty()) {
    out += ctx.preamble;
    out += '\n';
  }
  out += kServicesMarker;
  out += ' ';
  bool first = true;
  for (const auto& service : ctx.catalog) {
    if (!first) out += ", ";
    first = false;
    out += service.display();
  }
  out += '\n';
  out += kDevicesMarker;
  out += ' ';
  first = true;
  for (const auto& device : ctx.registry) {
    if (!first) out += '\n';
    first = false;
    out += render_device_line(device);
  }
  return out;
}

SystemContext parse_system_prompt(std::string_view text) {
  const auto services_at = find_marker(text, kServicesMarker);
  if (services_at == std::string_view::npos) {
    throw CodecError(CodecErrorKind::kMissingSection, "no 'Services:' section");
  }
  const auto devices_at = find_marker(text, kDevicesMarker, services_at);
  if (devices_at == std::string_view::npos) {
    throw CodecError(CodecErrorKind::kMissingSection, "no 'Devices:' section");
  }

  SystemContext ctx;
  ctx.preamble = services_at == 0 ? std::string() : std::string(text.substr(0, services_at - 1));

  const std::size_t list_begin = services_at + kServicesMarker.size();
  std::string_view list = trim(text.substr(list_begin, devices_at - list_begin));
  for (auto& service : parse_service_list(list)) {
    try {
      ctx.catalog.add(std::move(service));
    } catch (const ModelError& e) {
      throw CodecError(CodecErrorKind::kMalformedServiceList, e.what());
    }
  }

  std::size_t line_no = 1;
  for (std::size_t i = 0; i < devices_at; ++i) line_no += text[i] == '\n';

  std::size_t pos = devices_at + kDevicesMarker.size();
  if (pos < text.size() && text[pos] == ' ') ++pos;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) {
      Device device = parse_device_line(line, line_no);
      try {
        ctx.registry.add(std::move(device));
      } catch (const ModelError& e) {
        throw CodecError(CodecErrorKind::kMalformedDeviceLine,
                         "device line " + std::to_string(line_no) + ": " + e.what(), line_no);
      }
    }
    ++line_no;
    pos = eol + 1;
  }
  if (ctx.registry.empty()) {
    throw CodecError(CodecErrorKind::kMissingSection, "'Devices:' section lists no devices");
  }
  return ctx;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "system";
}

std::string PromptDocument::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& turn : turns) {
    doc.push_back({{"from", to_string(turn.role)}, {"value", turn.value}});
  }
  return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

PromptDocument PromptDocument::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CodecError(CodecErrorKind::kMalformedDocument, e.what());
  }
  if (!doc.is_array()) throw CodecError(CodecErrorKind::kMalformedDocument, "expected an array");
  PromptDocument out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("from") || !item.contains("value") ||
        !item["from"].is_string() || !item["value"].is_string()) {
      throw CodecError(CodecErrorKind::kMalformedDocument,
                       "each turn needs string 'from' and 'value'");
    }
    const auto& from = item["from"].get_ref<const std::string&>();
    Role role;
    if (from == "system") {
      role = Role::kSystem;
    } else if (from == "user") {
      role = Role::kUser;
    } else if (from == "assistant") {
      role = Role::kAssistant;
    } else {
      throw CodecError(CodecErrorKind::kMalformedDocument, "unknown role '" + from + "'");
    }
    out.turns.push_back({role, item["value"].get<std::string>()});
  }
  return out;
}

const Turn* PromptDocument::find(Role role) const {
  for (const auto& turn : turns) {
    if (turn.role == role) return &turn;
  }
  return nullptr;
}

PromptDocument make_chat(std::string system_text, std::string_view utterance) {
  if (trim(utterance).empty()) {
    throw CodecError(CodecErrorKind::kEmptyUtterance, "user utterance is empty");
  }
  return PromptDocument{{{Role::kSystem, std::move(system_text)},
                         {Role::kUser, std::string(utterance)}}};
}

PromptDocument render_chat(const SystemContext& ctx, std::string_view utterance) {
  if (trim(utterance).empty()) {
    throw CodecError(CodecErrorKind::kEmptyUtterance, "user utterance is empty");
  }
  return make_chat(render_system_prompt(ctx), utterance);
}

}  // namespace edgeha
