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

#include "edgeha/action_parser.hpp"

#include <cctype>
#include <set>
#include <vector>

#include <json.hpp>

namespace edgeha {

namespace {

using nlohmann::json;

bool is_info_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::size_t find_action_fence(std::string_view raw, std::size_t from) {
  for (std::size_t pos = raw.find(kActionFenceOpen, from); pos != std::string_view::npos;
       pos = raw.find(kActionFenceOpen, pos + 1)) {
    const std::size_t after = pos + kActionFenceOpen.size();
    if (after == raw.size() || !is_info_char(raw[after])) return pos;
  }
  return std::string_view::npos;
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kUnterminatedFence: return "UnterminatedFence";
    case ParseErrorKind::kMalformedJson: return "MalformedJson";
    case ParseErrorKind::kMissingField: return "MissingField";
  }
  return "ParseError";
}

ParseError::ParseError(ParseErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ActionBlockSplit extract_action_block(std::string_view raw) {
  ActionBlockSplit out;
  std::string outside;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = find_action_fence(raw, pos);
    if (open == std::string_view::npos) {
      outside.append(raw.substr(pos));
      break;
    }
    outside.append(raw.substr(pos, open - pos));
    const std::size_t body = open + kActionFenceOpen.size();
    const std::size_t close = raw.find(kFence, body);
    if (close == std::string_view::npos) {
      if (out.block_count == 0) {
        throw ParseError(ParseErrorKind::kUnterminatedFence,
                         "action fence opened at offset " + std::to_string(open) +
                             " is never closed");
      }
      ++out.block_count;
      break;
    }
    if (out.block_count++ == 0) out.block = std::string(raw.substr(body, close - body));
    pos = close + kFence.size();
  }
  out.response_text = std::string(trim(outside));
  return out;
}

RawAction parse_action_json(std::string_view block) {
  // nlohmann keeps the last of duplicated keys; track them per object.
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  const json::parser_callback_t track = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        open_objects.emplace_back();
        break;
      case json::parse_event_t::key:
        if (!open_objects.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
          duplicate = parsed.get<std::string>();
        }
        break;
      case json::parse_event_t::object_end:
        open_objects.pop_back();
        break;
      default:
        break;
    }
    return true;
  };

  json doc;
  try {
    doc = json::parse(block.begin(), block.end(), track, /*allow_exceptions=*/true,
                      /*ignore_comments=*/false);
  } catch (const json::exception& e) {
    throw ParseError(ParseErrorKind::kMalformedJson, e.what());
  }
  if (!duplicate.empty()) {
    throw ParseError(ParseErrorKind::kMalformedJson, "duplicate key '" + duplicate + "'");
  }
  if (!doc.is_object()) {
    throw ParseError(ParseErrorKind::kMalformedJson, "action must be a JSON object");
  }

  RawAction action;
  std::optional<std::string> service;
  std::optional<std::string> target;
  for (const auto& [key, value] : doc.items()) {
    if (key == "service" || key == "target_device" || key == "device") {
      if (!value.is_string()) {
        throw ParseError(ParseErrorKind::kMalformedJson, "'" + key + "' must be a string");
      }
      const auto& text = value.get_ref<const std::string&>();
      if (key == "service") {
        service = text;
      } else if (target && *target != text) {
        throw ParseError(ParseErrorKind::kMalformedJson,
                         "'device' and 'target_device' disagree");
      } else {
        target = text;
      }
    } else if (value.is_string()) {
      action.params.emplace_back(key, value.get<std::string>());
    } else if (value.is_number()) {
      action.params.emplace_back(key, value.get<double>());
    } else {
      throw ParseError(ParseErrorKind::kMalformedJson,
                       "parameter '" + key + "' must be a string or number");
    }
  }
  if (!service) throw ParseError(ParseErrorKind::kMissingField, "service");
  if (!target) throw ParseError(ParseErrorKind::kMissingField, "target_device");
  action.service = std::move(*service);
  action.device = std::move(*target);
  return action;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kOk: return "Ok";
    case Outcome::kNoActionBlock: return "NoActionBlock";
    case Outcome::kMalformedJson: return "MalformedJson";
    case Outcome::kMissingField: return "MissingField";
    case Outcome::kUnknownService: return "UnknownService";
    case Outcome::kUnknownDevice: return "UnknownDevice";
    case Outcome::kDomainMismatch: return "DomainMismatch";
    case Outcome::kMissingParam: return "MissingParam";
    case Outcome::kUnexpectedParam: return "UnexpectedParam";
  }
  return "Unknown";
}

Outcome outcome_for(ValidationErrorKind kind) {
  switch (kind) {
    case ValidationErrorKind::kUnknownService: return Outcome::kUnknownService;
    case ValidationErrorKind::kUnknownDevice: return Outcome::kUnknownDevice;
    case ValidationErrorKind::kDomainMismatch: return Outcome::kDomainMismatch;
    case ValidationErrorKind::kMissingParam: return Outcome::kMissingParam;
    case ValidationErrorKind::kUnexpectedParam: return Outcome::kUnexpectedParam;
  }
  return Outcome::kUnknownService;
}

AssistantOutput parse_assistant_output(std::string_view raw, const ServiceCatalog& catalog,
                                       const DeviceRegistry& registry) {
  AssistantOutput out;
  ActionBlockSplit split;
  try {
    split = extract_action_block(raw);
  } catch (const ParseError& e) {
    // Everything from the dangling fence on is dropped from the response.
    out.response_text = std::string(trim(raw.substr(0, find_action_fence(raw, 0))));
    out.outcome = Outcome::kNoActionBlock;
    out.detail = e.what();
    out.block_count = 1;
    return out;
  }
  out.response_text = std::move(split.response_text);
  out.block_count = split.block_count;
  if (!split.block) {
    out.outcome = Outcome::kNoActionBlock;
    out.detail = "no ```homeassistant block";
    return out;
  }

  try {
    out.raw_action = parse_action_json(*split.block);
  } catch (const ParseError& e) {
    out.outcome = e.kind() == ParseErrorKind::kMissingField ? Outcome::kMissingField
                                                            : Outcome::kMalformedJson;
    out.detail = e.what();
    return out;
  }

  try {
    out.action = validate_action(*out.raw_action, catalog, registry);
    out.outcome = Outcome::kOk;
  } catch (const ValidationError& e) {
    out.outcome = outcome_for(e.kind());
    out.detail = e.what();
  }
  return out;
}

std::string format_assistant_text(std::string_view response_text, const RawAction& action,
                                  std::string_view device_key) {
  nlohmann::ordered_json body;
  body["service"] = action.service;
  body[std::string(device_key)] = action.device;
  for (const auto& [name, value] : action.params) {
    if (const double* d = std::get_if<double>(&value)) {
      body[name] = *d;
    } else {
      body[name] = std::get<std::string>(value);
    }
  }
  std::string out(response_text);
  out += '\n';
  out += kActionFenceOpen;
  out += '\n';
  out += body.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
  out += '\n';
  out += kFence;
  return out;
}

}  // namespace edgeha
