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

// Executes validated actions against a device registry through per-domain
// transition tables.

#ifndef EDGEHA_HOME_SIMULATOR_HPP_
#define EDGEHA_HOME_SIMULATOR_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgeha/core_model.hpp"

namespace edgeha {

struct SimulatorSettings {
  double volume_step = 0.1;
  double fan_speed_step = 10.0;
};

enum class EffectOp { kSet, kAddClamped };

struct AttributeEffect {
  std::string attribute;
  EffectOp op = EffectOp::kSet;
  Scalar operand;
  // Bounds and starting value for kAddClamped.
  double lo = 0.0;
  double hi = 1.0;
  double initial = 0.0;
};

// Behaviour of one service. For domains with an enumerated state set,
// `transitions` is total over that set. For free-form domains the state is
// kept, or replaced by the value of `state_param` when set.
struct ServiceRule {
  std::string domain;
  std::string name;
  std::map<std::string, std::string, std::less<>> transitions;
  std::optional<std::string> state_param;
  std::vector<AttributeEffect> effects;
  bool toggle = false;
};

enum class SimulatorErrorKind { kUnknownDomain, kStaleAction, kInvalidParamValue };

std::string_view to_string(SimulatorErrorKind kind);

class SimulatorError : public std::runtime_error {
 public:
  SimulatorError(SimulatorErrorKind kind, const std::string& message);
  SimulatorErrorKind kind() const { return kind_; }

 private:
  SimulatorErrorKind kind_;
};

class TransitionTable {
 public:
  void add(ServiceRule rule);
  const ServiceRule* find(std::string_view domain, std::string_view name) const;
  std::vector<const ServiceRule*> rules() const;
  std::size_t size() const { return rules_.size(); }

  // Next state for `service` from `prior`. Parameters not consumed as the
  // primary state are copied onto attributes of the same name.
  // Throws kUnknownDomain when no rule matches.
  DeviceState apply(const ServiceSignature& service, const DeviceState& prior,
                    const Params& params = {}) const;

 private:
  std::map<std::string, ServiceRule, std::less<>> rules_;
};

// States enumerated when checking totality. Free-form domains get a small
// representative set.
std::vector<std::string> enumeration_states(std::string_view domain);

// Every built-in service rule.
TransitionTable builtin_transition_table(const SimulatorSettings& settings = {});

// Rules for the services of `catalog`. Throws kUnknownDomain for services
// outside the built-in set.
TransitionTable default_transition_table(const ServiceCatalog& catalog,
                                         const SimulatorSettings& settings = {});

struct ExecutionRecord {
  std::uint64_t sequence = 0;
  ActionCall action;
  DeviceState prior_state;
  DeviceState new_state;
  std::chrono::steady_clock::time_point timestamp;
};

// Applies the table and writes the new state back. Throws kStaleAction when
// the device left the registry after validation.
ExecutionRecord execute(const ActionCall& action, DeviceRegistry& registry,
                        const TransitionTable& table);

// A registry plus its append-only execution log. Mutations are serialized;
// readers get consistent copies.
class HomeSimulator {
 public:
  HomeSimulator(DeviceRegistry registry, TransitionTable table);

  ExecutionRecord execute(const ActionCall& action);
  DeviceRegistry snapshot() const;
  // Records with sequence >= cursor.
  std::vector<ExecutionRecord> events_since(std::uint64_t cursor) const;
  std::uint64_t event_count() const;
  const TransitionTable& table() const { return table_; }

 private:
  mutable std::mutex mu_;
  DeviceRegistry registry_;
  TransitionTable table_;
  std::vector<ExecutionRecord> log_;
};

}  // namespace edgeha

#endif  // EDGEHA_HOME_SIMULATOR_HPP_
