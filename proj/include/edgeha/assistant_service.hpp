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


// Per-session homes wired through prompt rendering, generation, action
// parsing and simulated execution, with a templated fallback whenever the
// model output does not yield a valid action.

#ifndef EDGEHA_ASSISTANT_SERVICE_HPP_
#define EDGEHA_ASSISTANT_SERVICE_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "edgeha/action_parser.hpp"
#include "edgeha/home_simulator.hpp"
#include "edgeha/inference_backend.hpp"
#include "edgeha/prompt_codec.hpp"

namespace edgeha {

inline constexpr std::string_view kFallbackText = "Sorry, I couldn't complete that request.";

enum class ServiceErrorKind {
  kUnknownSession,
  kInvalidHomeConfig,
  kEmptyUtterance,
  kBadRequest,
  kBackendUnavailable,
};

std::string_view to_string(ServiceErrorKind kind);

class ServiceError : public std::runtime_error {
 public:
  ServiceError(ServiceErrorKind kind, const std::string& message);
  ServiceErrorKind kind() const { return kind_; }

 private:
  ServiceErrorKind kind_;
};

// Blank input or `{}` gives the reference home. A JSON object holds either
// `system_prompt` text or `services` (signature strings) and `devices`
// ({id, name, state, attributes}) with an optional `preamble`. Anything
// that is not JSON is read as system-prompt text. Services must have
// built-in behaviour. Throws ServiceError(kInvalidHomeConfig).
SystemContext parse_home_config(std::string_view body);

enum class ChatOutcome { kOk, kFallback };

std::string_view to_string(ChatOutcome outcome);

struct ChatResponse {
  std::string response_text;
  std::optional<ActionCall> action;
  std::optional<DeviceState> prior_state;
  std::optional<DeviceState> new_state;
  std::optional<std::uint64_t> event_sequence;
  ChatOutcome outcome = ChatOutcome::kFallback;
  // Parse outcome or failure class behind a fallback.
  std::string reason;
  double latency_seconds = 0.0;
  ModelDescriptor model;
};

struct HistoryEntry {
  std::string user_text;
  AssistantOutput output;
  std::optional<ExecutionRecord> record;
};

class AssistantService {
 public:
  explicit AssistantService(std::shared_ptr<BackendHandle> backend,
                            SimulatorSettings settings = {});

  std::string create_session(std::string_view home_config);
  std::string create_session(SystemContext context);

  // Throws kUnknownSession, kEmptyUtterance or kBackendUnavailable. Every
  // other failure is a fallback response with the registry untouched.
  ChatResponse handle_chat(std::string_view session_id, std::string_view user_text);

  std::vector<Device> get_devices(std::string_view session_id) const;
  std::vector<ExecutionRecord> events(std::string_view session_id, std::uint64_t cursor) const;
  std::vector<HistoryEntry> history(std::string_view session_id) const;
  std::size_t session_count() const;
  nlohmann::json config() const;

  // Sessions are saved as their current system prompt; history and event
  // logs start empty after a restore.
  std::string snapshot() const;
  void restore(std::string_view snapshot);
  void save_snapshot(const std::string& path) const;
  void load_snapshot(const std::string& path);

 private:
  struct Session {
    Session(std::string id, std::string preamble, ServiceCatalog catalog, DeviceRegistry registry,
            TransitionTable table);

    const std::string id;
    const std::string preamble;
    const ServiceCatalog catalog;
    HomeSimulator home;
    std::mutex pipeline_mu;
    mutable std::mutex history_mu;
    std::vector<HistoryEntry> history;
    const std::chrono::system_clock::time_point created_at;
  };

  std::shared_ptr<Session> find(std::string_view id) const;
  std::string add_session(SystemContext context, std::optional<std::string> id);
  std::string new_id();

  std::shared_ptr<BackendHandle> backend_;
  SimulatorSettings settings_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::mutex id_mu_;
  std::uint64_t id_state_;
};

nlohmann::json to_json(const DeviceState& state);
nlohmann::json to_json(const Device& device);
nlohmann::json to_json(const ActionCall& action);
nlohmann::json to_json(const ExecutionRecord& record);
nlohmann::json to_json(const ChatResponse& response);

}  // namespace edgeha

#endif  // EDGEHA_ASSISTANT_SERVICE_HPP_
