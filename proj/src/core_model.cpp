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

#include "edgeha/core_model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <system_error>

namespace edgeha {

namespace {

constexpr std::array<std::string_view, 2> kOnOff = {"on", "off"};
constexpr std::array<std::string_view, 4> kCover = {"open", "closed", "opening", "closing"};
constexpr std::array<std::string_view, 2> kLock = {"locked", "unlocked"};
constexpr std::array<std::string_view, 5> kMediaPlayer = {"playing", "paused", "standby", "off",
                                                          "on"};
constexpr std::array<std::string_view, 3> kTimer = {"active", "idle", "paused"};
constexpr std::array<std::string_view, 4> kVacuum = {"docked", "cleaning", "paused", "returning"};

bool is_token_head(char c) { return c >= 'a' && c <= 'z'; }
bool is_token_tail(char c) { return is_token_head(c) || (c >= '0' && c <= '9') || c == '_'; }

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

std::string format_scalar(const Scalar& value) {
  if (const double* d = std::get_if<double>(&value)) return format_number(*d);
  return std::get<std::string>(value);
}

Scalar parse_scalar(std::string_view text) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (!text.empty() && ec == std::errc() && ptr == last && std::isfinite(value) &&
      format_number(value) == text) {
    return value;
  }
  return std::string(text);
}

bool is_token(std::string_view text) {
  if (text.empty() || !is_token_head(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(), is_token_tail);
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

std::string_view to_string(ModelErrorKind kind) {
  switch (kind) {
    case ModelErrorKind::kMalformedEntityId: return "MalformedEntityId";
    case ModelErrorKind::kMalformedService: return "MalformedService";
    case ModelErrorKind::kDuplicateEntity: return "DuplicateEntity";
    case ModelErrorKind::kDuplicateService: return "DuplicateService";
    case ModelErrorKind::kIllegalState: return "IllegalState";
    case ModelErrorKind::kAttributeOutOfRange: return "AttributeOutOfRange";
    case ModelErrorKind::kMissingDevice: return "MissingDevice";
  }
  return "ModelError";
}

ModelError::ModelError(ModelErrorKind kind, std::string subject, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      subject_(std::move(subject)) {}

EntityId::EntityId(std::string domain, std::string object_id)
    : domain_(std::move(domain)), object_id_(std::move(object_id)) {
  if (!is_token(domain_) || !is_token(object_id_)) {
    throw ModelError(ModelErrorKind::kMalformedEntityId, str(),
                     "entity id parts must match [a-z][a-z0-9_]*: '" + str() + "'");
  }
}

EntityId parse_entity_id(std::string_view text) {
  const std::string_view t = trim(text);
  const auto dot = t.find('.');
  if (dot == std::string_view::npos) {
    throw ModelError(ModelErrorKind::kMalformedEntityId, std::string(t),
                     "missing '.' in entity id '" + std::string(t) + "'");
  }
  return EntityId(std::string(t.substr(0, dot)), std::string(t.substr(dot + 1)));
}

ServiceSignature ServiceSignature::make(std::string domain, std::string name,
                                        std::vector<std::string> params) {
  ServiceSignature sig{std::move(domain), std::move(name), std::move(params)};
  if (!is_token(sig.domain) || !is_token(sig.name)) {
    throw ModelError(ModelErrorKind::kMalformedService, sig.canonical(),
                     "service parts must match [a-z][a-z0-9_]*: '" + sig.canonical() + "'");
  }
  std::set<std::string_view> seen;
  for (const auto& p : sig.params) {
    if (!is_token(p)) {
      throw ModelError(ModelErrorKind::kMalformedService, sig.canonical(),
                       "bad parameter name '" + p + "' in " + sig.canonical());
    }
    if (!seen.insert(p).second) {
      throw ModelError(ModelErrorKind::kMalformedService, sig.canonical(),
                       "duplicate parameter '" + p + "' in " + sig.canonical());
    }
  }
  return sig;
}

ServiceSignature ServiceSignature::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto open = t.find('(');
  const std::string_view head = t.substr(0, open);
  std::vector<std::string> params;
  if (open != std::string_view::npos) {
    if (t.back() != ')' || t.find('(', open + 1) != std::string_view::npos) {
      throw ModelError(ModelErrorKind::kMalformedService, std::string(t),
                       "unbalanced parameter list in '" + std::string(t) + "'");
    }
    std::string_view inner = trim(t.substr(open + 1, t.size() - open - 2));
    while (!inner.empty()) {
      const auto comma = inner.find(',');
      params.emplace_back(trim(inner.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      inner = inner.substr(comma + 1);
      if (trim(inner).empty()) params.emplace_back();  // trailing comma
    }
  }
  const auto dot = head.find('.');
  if (dot == std::string_view::npos) {
    throw ModelError(ModelErrorKind::kMalformedService, std::string(t),
                     "missing '.' in service '" + std::string(t) + "'");
  }
  return make(std::string(head.substr(0, dot)), std::string(head.substr(dot + 1)),
              std::move(params));
}

std::string ServiceSignature::display() const {
  std::string out = canonical() + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += params[i];
  }
  out += ')';
  return out;
}

bool ServiceSignature::has_param(std::string_view param) const {
  return std::find(params.begin(), params.end(), param) != params.end();
}

Attributes::Attributes(std::initializer_list<Entry> entries) {
  for (const auto& [name, value] : entries) set(name, value);
}

const Scalar* Attributes::find(std::string_view name) const {
  for (const auto& [key, value] : entries_) {
    if (key == name) return &value;
  }
  return nullptr;
}

void Attributes::set(std::string name, Scalar value) {
  for (auto& [key, existing] : entries_) {
    if (key == name) {
      existing = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(name), std::move(value));
}

bool Attributes::erase(std::string_view name) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const Entry& e) { return e.first == name; });
  if (it == entries_.end()) return false;
  entries_.erase(it);
  return true;
}

std::optional<std::span<const std::string_view>> legal_states(std::string_view domain) {
  if (domain == "light" || domain == "switch" || domain == "fan") return kOnOff;
  if (domain == "cover") return kCover;
  if (domain == "lock") return kLock;
  if (domain == "media_player") return kMediaPlayer;
  if (domain == "timer") return kTimer;
  if (domain == "vacuum") return kVacuum;
  return std::nullopt;
}

bool is_state_token(std::string_view text) {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u <= 0x20 || u == 0x7f || c == ';' || c == '=' || c == '\'';
  });
}

bool is_legal_state(std::string_view domain, std::string_view state) {
  if (auto allowed = legal_states(domain)) {
    return std::find(allowed->begin(), allowed->end(), state) != allowed->end();
  }
  return is_state_token(state);
}

void check_state(std::string_view domain, const DeviceState& state) {
  if (!is_legal_state(domain, state.primary_state)) {
    throw ModelError(ModelErrorKind::kIllegalState, state.primary_state,
                     "state '" + state.primary_state + "' is not legal for domain '" +
                         std::string(domain) + "'");
  }
  if (const Scalar* vol = state.attributes.find("vol")) {
    const double* v = std::get_if<double>(vol);
    if (!v || *v < 0.0 || *v > 1.0) {
      throw ModelError(ModelErrorKind::kAttributeOutOfRange, format_scalar(*vol),
                       "vol must be a number in [0, 1], got '" + format_scalar(*vol) + "'");
    }
  }
}

void DeviceRegistry::add(Device device) {
  check_state(device.id.domain(), device.state);
  std::string key = device.id.str();
  if (index_.count(key)) {
    throw ModelError(ModelErrorKind::kDuplicateEntity, key, "duplicate device id '" + key + "'");
  }
  index_.emplace(std::move(key), devices_.size());
  devices_.push_back(std::move(device));
}

bool DeviceRegistry::remove(const EntityId& id) {
  auto it = index_.find(id.str());
  if (it == index_.end()) return false;
  devices_.erase(devices_.begin() + static_cast<std::ptrdiff_t>(it->second));
  index_.clear();
  for (std::size_t i = 0; i < devices_.size(); ++i) index_.emplace(devices_[i].id.str(), i);
  return true;
}

const Device* DeviceRegistry::find(const EntityId& id) const { return find(id.str()); }

const Device* DeviceRegistry::find(std::string_view canonical) const {
  auto it = index_.find(std::string(canonical));
  return it == index_.end() ? nullptr : &devices_[it->second];
}

void DeviceRegistry::set_state(const EntityId& id, DeviceState state) {
  auto it = index_.find(id.str());
  if (it == index_.end()) {
    throw ModelError(ModelErrorKind::kMissingDevice, id.str(), "no device '" + id.str() + "'");
  }
  check_state(id.domain(), state);
  devices_[it->second].state = std::move(state);
}

void ServiceCatalog::add(ServiceSignature service) {
  std::string key = service.canonical();
  if (index_.count(key)) {
    throw ModelError(ModelErrorKind::kDuplicateService, key, "duplicate service '" + key + "'");
  }
  index_.emplace(std::move(key), services_.size());
  services_.push_back(std::move(service));
}

const ServiceSignature* ServiceCatalog::find(std::string_view canonical) const {
  auto it = index_.find(std::string(canonical));
  return it == index_.end() ? nullptr : &services_[it->second];
}

const Scalar* ActionCall::param(std::string_view name) const {
  for (const auto& [key, value] : params) {
    if (key == name) return &value;
  }
  return nullptr;
}

std::string_view to_string(ValidationErrorKind kind) {
  switch (kind) {
    case ValidationErrorKind::kUnknownService: return "UnknownService";
    case ValidationErrorKind::kUnknownDevice: return "UnknownDevice";
    case ValidationErrorKind::kDomainMismatch: return "DomainMismatch";
    case ValidationErrorKind::kMissingParam: return "MissingParam";
    case ValidationErrorKind::kUnexpectedParam: return "UnexpectedParam";
  }
  return "ValidationError";
}

ValidationError::ValidationError(ValidationErrorKind kind, std::string offending)
    : std::runtime_error(std::string(to_string(kind)) + ": '" + offending + "'"),
      kind_(kind),
      offending_(std::move(offending)) {}

ActionCall validate_action(const RawAction& raw, const ServiceCatalog& catalog,
                           const DeviceRegistry& registry) {
  const std::string_view service_name = trim(raw.service);
  const std::string_view device_name = trim(raw.device);

  const ServiceSignature* service = catalog.find(service_name);
  if (!service) {
    throw ValidationError(ValidationErrorKind::kUnknownService, std::string(service_name));
  }
  const Device* device = registry.find(device_name);
  if (!device) {
    throw ValidationError(ValidationErrorKind::kUnknownDevice, std::string(device_name));
  }
  if (service->domain != device->id.domain()) {
    throw ValidationError(ValidationErrorKind::kDomainMismatch,
                          service->canonical() + " -> " + device->id.str());
  }

  ActionCall call{*service, device->id, {}};
  for (const auto& name : service->params) {
    auto it = std::find_if(raw.params.begin(), raw.params.end(),
                           [&](const auto& p) { return p.first == name; });
    if (it == raw.params.end()) {
      throw ValidationError(ValidationErrorKind::kMissingParam, name);
    }
    call.params.emplace_back(name, it->second);
  }
  for (const auto& [name, value] : raw.params) {
    if (!service->has_param(name)) {
      throw ValidationError(ValidationErrorKind::kUnexpectedParam, name);
    }
  }
  return call;
}

}  // namespace edgeha
