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


#include "edgeha/assistant_service.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "edgeha/random.hpp"
#include "edgeha/reference_home.hpp"

namespace edgeha {

namespace {

using nlohmann::json;

json scalar_json(const Scalar& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

ServiceError invalid_home(const std::string& message) {
  return ServiceError(ServiceErrorKind::kInvalidHomeConfig, message);
}

SystemContext context_from_json(const json& j) {
  SystemContext ctx;
  if (j.contains("preamble")) ctx.preamble = j.at("preamble").get<std::string>();
  for (const auto& s : j.at("services")) {
    ctx.catalog.add(ServiceSignature::parse(s.get<std::string>()));
  }
  for (const auto& d : j.at("devices")) {
    Device device{parse_entity_id(d.at("id").get<std::string>()), d.at("name").get<std::string>(),
                  {d.at("state").get<std::string>(), {}}};
    if (d.contains("attributes")) {
      for (const auto& [key, value] : d.at("attributes").items()) {
        if (value.is_number()) {
          device.state.attributes.set(key, value.get<double>());
        } else {
          device.state.attributes.set(key, value.get<std::string>());
        }
      }
    }
    ctx.registry.add(std::move(device));
  }
  return ctx;
}

}  // namespace

std::string_view to_string(ServiceErrorKind kind) {
  switch (kind) {
    case ServiceErrorKind::kUnknownSession: return "UnknownSession";
    case ServiceErrorKind::kInvalidHomeConfig: return "InvalidHomeConfig";
    case ServiceErrorKind::kEmptyUtterance: return "EmptyUtterance";
    case ServiceErrorKind::kBadRequest: return "BadRequest";
    case ServiceErrorKind::kBackendUnavailable: return "BackendUnavailable";
  }
  return "ServiceError";
}

ServiceError::ServiceError(ServiceErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

std::string_view to_string(ChatOutcome outcome) {
  return outcome == ChatOutcome::kOk ? "Ok" : "Fallback";
}

SystemContext parse_home_config(std::string_view body) {
  const auto text = trim(body);
  if (text.empty()) return reference::default_home();
  SystemContext ctx;
  try {
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
      ctx = parse_system_prompt(body);
    } else if (!j.is_object()) {
      throw invalid_home("home config must be a JSON object or system-prompt text");
    } else if (j.empty()) {
      return reference::default_home();
    } else if (j.contains("system_prompt")) {
      ctx = parse_system_prompt(j.at("system_prompt").get<std::string>());
    } else if (j.contains("services") && j.contains("devices")) {
      ctx = context_from_json(j);
    } else {
      throw invalid_home("home config needs 'system_prompt' or 'services' and 'devices'");
    }
    render_system_prompt(ctx);
    default_transition_table(ctx.catalog);
  } catch (const ServiceError&) {
    throw;
  } catch (const json::exception& e) {
    throw invalid_home(e.what());
  } catch (const std::exception& e) {
    throw invalid_home(e.what());
  }
  return ctx;
}

AssistantService::Session::Session(std::string id_in, std::string preamble_in,
                                   ServiceCatalog catalog_in, DeviceRegistry registry,
                                   TransitionTable table)
    : id(std::move(id_in)),
      preamble(std::move(preamble_in)),
      catalog(std::move(catalog_in)),
      home(std::move(registry), std::move(table)),
      created_at(std::chrono::system_clock::now()) {}

AssistantService::AssistantService(std::shared_ptr<BackendHandle> backend,
                                   SimulatorSettings settings)
    : backend_(std::move(backend)), settings_(settings) {
  std::random_device rd;
  id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
              static_cast<std::uint64_t>(
                  std::chrono::steady_clock::now().time_since_epoch().count());
}

std::string AssistantService::new_id() {
  std::lock_guard lock(id_mu_);
  SplitMix64 rng(id_state_++);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

std::string AssistantService::add_session(SystemContext context, std::optional<std::string> id) {
  TransitionTable table;
  try {
    table = default_transition_table(context.catalog, settings_);
  } catch (const SimulatorError& e) {
    throw invalid_home(e.what());
  }
  std::unique_lock lock(sessions_mu_);
  std::string sid = id ? *id : std::string();
  while (sid.empty() || sessions_.count(sid)) sid = new_id();
  sessions_.emplace(sid, std::make_shared<Session>(sid, std::move(context.preamble),
                                                   std::move(context.catalog),
                                                   std::move(context.registry), std::move(table)));
  return sid;
}

std::string AssistantService::create_session(std::string_view home_config) {
  return add_session(parse_home_config(home_config), std::nullopt);
}

std::string AssistantService::create_session(SystemContext context) {
  return add_session(std::move(context), std::nullopt);
}

std::shared_ptr<AssistantService::Session> AssistantService::find(std::string_view id) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ServiceError(ServiceErrorKind::kUnknownSession, "no session '" + std::string(id) + "'");
  }
  return it->second;
}

ChatResponse AssistantService::handle_chat(std::string_view session_id,
                                           std::string_view user_text) {
  const auto session = find(session_id);
  if (trim(user_text).empty()) {
    throw ServiceError(ServiceErrorKind::kEmptyUtterance, "empty utterance");
  }
  std::lock_guard pipeline(session->pipeline_mu);

  ChatResponse response;
  response.model = backend_->config().model;
  HistoryEntry entry;
  entry.user_text = std::string(user_text);
  const auto fallback = [&](std::string reason, std::string detail) {
    response.outcome = ChatOutcome::kFallback;
    response.response_text = std::string(kFallbackText);
    response.reason = std::move(reason);
    entry.output.detail = std::move(detail);
    std::lock_guard lock(session->history_mu);
    session->history.push_back(std::move(entry));
    return response;
  };

  const SystemContext ctx{session->preamble, session->catalog, session->home.snapshot()};
  GenerationRequest request;
  try {
    request.prompt = render_chat(ctx, user_text);
  } catch (const CodecError& e) {
    return fallback(std::string(to_string(e.kind())), e.what());
  }
  GenerationResult result;
  try {
    result = backend_->generate(request);
  } catch (const BackendError& e) {
    if (e.kind() == BackendErrorKind::kContextOverflow) {
      return fallback(std::string(to_string(e.kind())), e.what());
    }
    throw ServiceError(ServiceErrorKind::kBackendUnavailable, e.what());
  }
  response.latency_seconds = result.latency_seconds;
  entry.output = parse_assistant_output(result.text, ctx.catalog, ctx.registry);
  if (entry.output.outcome != Outcome::kOk) {
    std::string detail = entry.output.detail;
    return fallback(std::string(to_string(entry.output.outcome)), std::move(detail));
  }
  try {
    ExecutionRecord record = session->home.execute(*entry.output.action);
    response.outcome = ChatOutcome::kOk;
    response.response_text = entry.output.response_text;
    response.action = record.action;
    response.prior_state = record.prior_state;
    response.new_state = record.new_state;
    response.event_sequence = record.sequence;
    entry.record = std::move(record);
  } catch (const SimulatorError& e) {
    return fallback(std::string(to_string(e.kind())), e.what());
  } catch (const ModelError& e) {
    return fallback(std::string(to_string(e.kind())), e.what());
  }
  std::lock_guard lock(session->history_mu);
  session->history.push_back(std::move(entry));
  return response;
}

std::vector<Device> AssistantService::get_devices(std::string_view session_id) const {
  const auto registry = find(session_id)->home.snapshot();
  return {registry.begin(), registry.end()};
}

std::vector<ExecutionRecord> AssistantService::events(std::string_view session_id,
                                                      std::uint64_t cursor) const {
  return find(session_id)->home.events_since(cursor);
}

std::vector<HistoryEntry> AssistantService::history(std::string_view session_id) const {
  const auto session = find(session_id);
  std::lock_guard lock(session->history_mu);
  return session->history;
}

std::size_t AssistantService::session_count() const {
  std::shared_lock lock(sessions_mu_);
  return sessions_.size();
}

json AssistantService::config() const {
  const auto& c = backend_->config();
  return {{"model",
           {{"name", c.model.name},
            {"parameter_scale", c.model.parameter_scale},
            {"quantization", to_string(c.model.quantization)},
            {"label", c.model.label()}}},
          {"backend", to_string(c.kind)},
          {"worker_threads", c.worker_threads},
          {"max_sequence_tokens", c.max_sequence_tokens},
          {"sessions", session_count()}};
}

std::string AssistantService::snapshot() const {
  nlohmann::ordered_json doc;
  doc["format"] = "edgeha-sessions";
  doc["version"] = 1;
  doc["sessions"] = nlohmann::ordered_json::array();
  std::shared_lock lock(sessions_mu_);
  for (const auto& [id, session] : sessions_) {
    const SystemContext ctx{session->preamble, session->catalog, session->home.snapshot()};
    doc["sessions"].push_back({{"id", id}, {"system_prompt", render_system_prompt(ctx)}});
  }
  return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

void AssistantService::restore(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "edgeha-sessions" ||
        doc.at("version").get<int>() != 1) {
      throw invalid_home("not a session snapshot");
    }
  } catch (const json::exception& e) {
    throw invalid_home(std::string("malformed session snapshot: ") + e.what());
  }
  for (const auto& s : doc.at("sessions")) {
    const std::string id = s.at("id").get<std::string>();
    SystemContext ctx;
    try {
      ctx = parse_system_prompt(s.at("system_prompt").get<std::string>());
    } catch (const std::exception& e) {
      throw invalid_home("session " + id + ": " + e.what());
    }
    {
      std::unique_lock lock(sessions_mu_);
      sessions_.erase(id);
    }
    add_session(std::move(ctx), id);
  }
}

void AssistantService::save_snapshot(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  out << snapshot();
  if (!out) throw std::runtime_error("cannot write snapshot '" + path + "'");
}

void AssistantService::load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read snapshot '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  restore(buffer.str());
}

json to_json(const DeviceState& state) {
  json attributes = json::object();
  for (const auto& [key, value] : state.attributes) attributes[key] = scalar_json(value);
  return {{"state", state.primary_state}, {"attributes", std::move(attributes)}};
}

json to_json(const Device& device) {
  json j = to_json(device.state);
  j["id"] = device.id.str();
  j["name"] = device.friendly_name;
  return j;
}

json to_json(const ActionCall& action) {
  json params = json::object();
  for (const auto& [key, value] : action.params) params[key] = scalar_json(value);
  return {{"service", action.service.canonical()},
          {"target_device", action.target_device.str()},
          {"params", std::move(params)}};
}

json to_json(const ExecutionRecord& record) {
  json j = to_json(record.action);
  j["sequence"] = record.sequence;
  j["prior_state"] = to_json(record.prior_state);
  j["new_state"] = to_json(record.new_state);
  return j;
}

json to_json(const ChatResponse& r) {
  json j;
  j["response_text"] = r.response_text;
  j["outcome"] = to_string(r.outcome);
  j["reason"] = r.reason.empty() ? json(nullptr) : json(r.reason);
  j["action"] = r.action ? to_json(*r.action) : json(nullptr);
  j["prior_state"] = r.prior_state ? to_json(*r.prior_state) : json(nullptr);
  j["new_state"] = r.new_state ? to_json(*r.new_state) : json(nullptr);
  j["event_sequence"] = r.event_sequence ? json(*r.event_sequence) : json(nullptr);
  j["latency_seconds"] = r.latency_seconds;
  j["model"] = {{"name", r.model.name},
                {"parameter_scale", r.model.parameter_scale},
                {"quantization", to_string(r.model.quantization)},
                {"label", r.model.label()}};
  return j;
}

}  // namespace edgeha
