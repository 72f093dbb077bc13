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

#include "edgeha/home_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace edgeha {

namespace {

using Transitions = std::map<std::string, std::string, std::less<>>;

std::string rule_key(std::string_view domain, std::string_view name) {
  std::string key(domain);
  key += '.';
  key += name;
  return key;
}

// Every legal state of `domain` maps to `target`.
Transitions to_all(std::string_view domain, const std::string& target) {
  Transitions t;
  const auto states = legal_states(domain).value();
  for (auto s : states) t.emplace(std::string(s), target);
  return t;
}

// Identity except for the listed moves.
Transitions moves(std::string_view domain,
                  std::initializer_list<std::pair<const char*, const char*>> changes) {
  Transitions t;
  const auto states = legal_states(domain).value();
  for (auto s : states) t.emplace(std::string(s), std::string(s));
  for (const auto& [from, to] : changes) t[from] = to;
  return t;
}

ServiceRule rule(std::string domain, std::string name, Transitions transitions,
                 bool toggle = false) {
  ServiceRule r;
  r.domain = std::move(domain);
  r.name = std::move(name);
  r.transitions = std::move(transitions);
  r.toggle = toggle;
  return r;
}

ServiceRule free_form(std::string domain, std::string name,
                      std::optional<std::string> state_param = std::nullopt) {
  ServiceRule r;
  r.domain = std::move(domain);
  r.name = std::move(name);
  r.state_param = std::move(state_param);
  return r;
}

AttributeEffect add_clamped(std::string attribute, double step, double lo, double hi) {
  return AttributeEffect{std::move(attribute), EffectOp::kAddClamped, step, lo, hi, lo};
}

// Keeps repeated volume steps from accumulating binary noise (0.1 + 0.2).
double snap(double value) { return std::round(value * 1e6) / 1e6; }

}  // namespace

std::string_view to_string(SimulatorErrorKind kind) {
  switch (kind) {
    case SimulatorErrorKind::kUnknownDomain: return "UnknownDomain";
    case SimulatorErrorKind::kStaleAction: return "StaleAction";
    case SimulatorErrorKind::kInvalidParamValue: return "InvalidParamValue";
  }
  return "SimulatorError";
}

SimulatorError::SimulatorError(SimulatorErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void TransitionTable::add(ServiceRule rule) {
  std::string key = rule_key(rule.domain, rule.name);
  rules_.insert_or_assign(std::move(key), std::move(rule));
}

const ServiceRule* TransitionTable::find(std::string_view domain, std::string_view name) const {
  auto it = rules_.find(rule_key(domain, name));
  return it == rules_.end() ? nullptr : &it->second;
}

std::vector<const ServiceRule*> TransitionTable::rules() const {
  std::vector<const ServiceRule*> out;
  out.reserve(rules_.size());
  for (const auto& [key, r] : rules_) out.push_back(&r);
  return out;
}

DeviceState TransitionTable::apply(const ServiceSignature& service, const DeviceState& prior,
                                   const Params& params) const {
  const ServiceRule* r = find(service.domain, service.name);
  if (!r) {
    throw SimulatorError(SimulatorErrorKind::kUnknownDomain,
                         "no transition rule for " + service.canonical());
  }
  DeviceState next = prior;
  if (!r->transitions.empty()) {
    auto it = r->transitions.find(prior.primary_state);
    if (it == r->transitions.end()) {
      throw SimulatorError(SimulatorErrorKind::kInvalidParamValue,
                           "state '" + prior.primary_state + "' is not in the table for " +
                               service.canonical());
    }
    next.primary_state = it->second;
  }
  for (const auto& [name, value] : params) {
    if (r->state_param && name == *r->state_param) {
      const std::string token = format_scalar(value);
      if (!is_legal_state(r->domain, token)) {
        throw SimulatorError(SimulatorErrorKind::kInvalidParamValue,
                             "'" + token + "' is not a state for " + r->domain);
      }
      next.primary_state = token;
    } else {
      next.attributes.set(name, value);
    }
  }
  for (const auto& effect : r->effects) {
    if (effect.op == EffectOp::kSet) {
      next.attributes.set(effect.attribute, effect.operand);
      continue;
    }
    const Scalar* current = next.attributes.find(effect.attribute);
    const double* as_number = current ? std::get_if<double>(current) : nullptr;
    const double base = as_number ? *as_number : effect.initial;
    const double step = std::get<double>(effect.operand);
    next.attributes.set(effect.attribute, std::clamp(snap(base + step), effect.lo, effect.hi));
  }
  return next;
}

std::vector<std::string> enumeration_states(std::string_view domain) {
  if (auto states = legal_states(domain)) return {states->begin(), states->end()};
  if (domain == "climate") return {"off", "heat", "cool", "auto"};
  if (domain == "todo") return {"0", "5"};
  return {"unknown"};
}

TransitionTable builtin_transition_table(const SimulatorSettings& settings) {
  TransitionTable table;
  const double vol = settings.volume_step;
  const double fan = settings.fan_speed_step;

  for (const char* domain : {"light", "switch", "fan"}) {
    table.add(rule(domain, "turn_on", to_all(domain, "on")));
    table.add(rule(domain, "turn_off", to_all(domain, "off")));
    table.add(rule(domain, "toggle", moves(domain, {{"on", "off"}, {"off", "on"}}), true));
  }
  {
    ServiceRule up = rule("fan", "increase_speed", to_all("fan", "on"));
    up.effects.push_back(add_clamped("percentage", fan, 0.0, 100.0));
    table.add(std::move(up));
    ServiceRule down = rule("fan", "decrease_speed", moves("fan", {}));
    down.effects.push_back(add_clamped("percentage", -fan, 0.0, 100.0));
    table.add(std::move(down));
  }

  // Both the short and the *_cover spellings are in circulation.
  for (const char* suffix : {"", "_cover"}) {
    const std::string s(suffix);
    table.add(rule("cover", "open" + s, to_all("cover", "open")));
    table.add(rule("cover", "close" + s, to_all("cover", "closed")));
    table.add(rule("cover", "stop" + s,
                   moves("cover", {{"opening", "open"}, {"closing", "closed"}})));
  }
  table.add(rule("cover", "toggle",
                 moves("cover", {{"open", "closed"},
                                 {"closed", "open"},
                                 {"opening", "closing"},
                                 {"closing", "opening"}}),
                 true));

  table.add(rule("lock", "lock", to_all("lock", "locked")));
  table.add(rule("lock", "unlock", to_all("lock", "unlocked")));

  table.add(rule("media_player", "turn_on", moves("media_player", {{"off", "on"}, {"standby", "on"}})));
  table.add(rule("media_player", "turn_off", to_all("media_player", "off")));
  table.add(rule("media_player", "toggle",
                 moves("media_player", {{"off", "on"},
                                        {"on", "off"},
                                        {"playing", "paused"},
                                        {"paused", "playing"}}),
                 true));
  table.add(rule("media_player", "media_play", to_all("media_player", "playing")));
  table.add(rule("media_player", "media_pause", moves("media_player", {{"playing", "paused"}})));
  table.add(rule("media_player", "media_play_pause",
                 moves("media_player", {{"playing", "paused"}, {"paused", "playing"}}), true));
  table.add(rule("media_player", "media_stop",
                 moves("media_player", {{"playing", "on"}, {"paused", "on"}})));
  table.add(rule("media_player", "media_next_track", moves("media_player", {})));
  table.add(rule("media_player", "media_previous_track", moves("media_player", {})));
  {
    ServiceRule up = rule("media_player", "volume_up", moves("media_player", {}));
    up.effects.push_back(add_clamped("vol", vol, 0.0, 1.0));
    table.add(std::move(up));
    ServiceRule down = rule("media_player", "volume_down", moves("media_player", {}));
    down.effects.push_back(add_clamped("vol", -vol, 0.0, 1.0));
    table.add(std::move(down));
    ServiceRule mute = rule("media_player", "volume_mute", moves("media_player", {}));
    mute.effects.push_back({"muted", EffectOp::kSet, std::string("true")});
    table.add(std::move(mute));
  }

  table.add(rule("timer", "start", to_all("timer", "active")));
  table.add(rule("timer", "cancel", to_all("timer", "idle")));
  table.add(rule("timer", "pause", moves("timer", {{"active", "paused"}})));

  table.add(rule("vacuum", "start", to_all("vacuum", "cleaning")));
  table.add(rule("vacuum", "pause",
                 moves("vacuum", {{"cleaning", "paused"}, {"returning", "paused"}})));
  table.add(rule("vacuum", "stop",
                 moves("vacuum", {{"cleaning", "paused"}, {"returning", "paused"}})));
  table.add(rule("vacuum", "return_to_base",
                 moves("vacuum", {{"cleaning", "returning"}, {"paused", "returning"}})));

  table.add(free_form("climate", "set_temperature"));
  table.add(free_form("climate", "set_humidity"));
  table.add(free_form("climate", "set_fan_mode"));
  table.add(free_form("climate", "set_hvac_mode", "hvac_mode"));

  table.add(free_form("todo", "add_item"));
  return table;
}

TransitionTable default_transition_table(const ServiceCatalog& catalog,
                                         const SimulatorSettings& settings) {
  const TransitionTable builtin = builtin_transition_table(settings);
  TransitionTable table;
  for (const auto& service : catalog) {
    const ServiceRule* r = builtin.find(service.domain, service.name);
    if (!r) {
      throw SimulatorError(SimulatorErrorKind::kUnknownDomain,
                           "no built-in behaviour for " + service.canonical());
    }
    table.add(*r);
  }
  return table;
}

ExecutionRecord execute(const ActionCall& action, DeviceRegistry& registry,
                        const TransitionTable& table) {
  const Device* device = registry.find(action.target_device);
  if (!device) {
    throw SimulatorError(SimulatorErrorKind::kStaleAction,
                         action.target_device.str() + " is no longer in the registry");
  }
  ExecutionRecord record;
  record.action = action;
  record.prior_state = device->state;
  record.new_state = table.apply(action.service, device->state, action.params);
  try {
    registry.set_state(action.target_device, record.new_state);
  } catch (const ModelError& e) {
    throw SimulatorError(SimulatorErrorKind::kInvalidParamValue, e.what());
  }
  record.timestamp = std::chrono::steady_clock::now();
  return record;
}

HomeSimulator::HomeSimulator(DeviceRegistry registry, TransitionTable table)
    : registry_(std::move(registry)), table_(std::move(table)) {}

ExecutionRecord HomeSimulator::execute(const ActionCall& action) {
  std::lock_guard lock(mu_);
  ExecutionRecord record = edgeha::execute(action, registry_, table_);
  record.sequence = log_.size();
  log_.push_back(record);
  return record;
}

DeviceRegistry HomeSimulator::snapshot() const {
  std::lock_guard lock(mu_);
  return registry_;
}

std::vector<ExecutionRecord> HomeSimulator::events_since(std::uint64_t cursor) const {
  std::lock_guard lock(mu_);
  if (cursor >= log_.size()) return {};
  return {log_.begin() + static_cast<std::ptrdiff_t>(cursor), log_.end()};
}

std::uint64_t HomeSimulator::event_count() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

}  // namespace edgeha
