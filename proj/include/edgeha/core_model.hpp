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

// Domain types shared by every module: entity ids, service signatures,
// device states, the device registry, the service catalog and the validated
// action call.

#ifndef EDGEHA_CORE_MODEL_HPP_
#define EDGEHA_CORE_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace edgeha {

// Attribute and parameter values. Integers are stored as doubles.
using Scalar = std::variant<double, std::string>;

// Formats doubles with the shortest representation that round-trips.
std::string format_scalar(const Scalar& value);
std::string format_number(double value);

// Returns a double iff `text` is a number whose shortest formatting is
// exactly `text`; otherwise the text itself.
Scalar parse_scalar(std::string_view text);

// [a-z][a-z0-9_]*
bool is_token(std::string_view text);

std::string_view trim(std::string_view text);

enum class ModelErrorKind {
  kMalformedEntityId,
  kMalformedService,
  kDuplicateEntity,
  kDuplicateService,
  kIllegalState,
  kAttributeOutOfRange,
  kMissingDevice,
};

std::string_view to_string(ModelErrorKind kind);

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorKind kind, std::string subject, const std::string& message);

  ModelErrorKind kind() const { return kind_; }
  const std::string& subject() const { return subject_; }

 private:
  ModelErrorKind kind_;
  std::string subject_;
};

class EntityId {
 public:
  EntityId() = default;
  // Throws ModelError(kMalformedEntityId) unless both parts are tokens.
  EntityId(std::string domain, std::string object_id);

  const std::string& domain() const { return domain_; }
  const std::string& object_id() const { return object_id_; }
  std::string str() const { return domain_ + "." + object_id_; }

  friend bool operator==(const EntityId&, const EntityId&) = default;
  friend auto operator<=>(const EntityId&, const EntityId&) = default;

 private:
  std::string domain_;
  std::string object_id_;
};

// Parses `<domain>.<object_id>` after trimming surrounding whitespace.
EntityId parse_entity_id(std::string_view text);

struct ServiceSignature {
  std::string domain;
  std::string name;
  std::vector<std::string> params;

  // Validates tokens and parameter uniqueness.
  static ServiceSignature make(std::string domain, std::string name,
                               std::vector<std::string> params = {});
  // Accepts `domain.name`, `domain.name()` or `domain.name(p1,p2)`.
  static ServiceSignature parse(std::string_view text);

  std::string canonical() const { return domain + "." + name; }
  // `domain.name(p1,p2)`; always carries the parentheses.
  std::string display() const;
  bool has_param(std::string_view param) const;

  friend bool operator==(const ServiceSignature&, const ServiceSignature&) = default;
};

// Ordered attribute list. Order is kept so prompt rendering is stable.
class Attributes {
 public:
  using Entry = std::pair<std::string, Scalar>;

  Attributes() = default;
  Attributes(std::initializer_list<Entry> entries);

  const Scalar* find(std::string_view name) const;
  // Replaces in place when present, appends otherwise.
  void set(std::string name, Scalar value);
  bool erase(std::string_view name);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Attributes&, const Attributes&) = default;

 private:
  std::vector<Entry> entries_;
};

struct DeviceState {
  std::string primary_state;
  Attributes attributes;

  friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

// Legal primary states of a built-in domain, or nullopt when the domain
// takes free-form state tokens (climate, todo and unknown domains).
std::optional<std::span<const std::string_view>> legal_states(std::string_view domain);

// Free-form tokens: non-empty, printable, no whitespace, ';', '=' or quote.
bool is_state_token(std::string_view text);
bool is_legal_state(std::string_view domain, std::string_view state);

// Throws ModelError when the state is illegal for `domain` or `vol` is
// outside [0, 1].
void check_state(std::string_view domain, const DeviceState& state);

struct Device {
  EntityId id;
  std::string friendly_name;
  DeviceState state;

  friend bool operator==(const Device&, const Device&) = default;
};

class DeviceRegistry {
 public:
  // Rejects duplicates and illegal states.
  void add(Device device);
  bool remove(const EntityId& id);

  const Device* find(const EntityId& id) const;
  const Device* find(std::string_view canonical) const;
  // Throws ModelError(kMissingDevice) for unknown ids.
  void set_state(const EntityId& id, DeviceState state);

  std::size_t size() const { return devices_.size(); }
  bool empty() const { return devices_.empty(); }
  std::span<const Device> devices() const { return devices_; }
  auto begin() const { return devices_.begin(); }
  auto end() const { return devices_.end(); }

  friend bool operator==(const DeviceRegistry& a, const DeviceRegistry& b) {
    return a.devices_ == b.devices_;
  }

 private:
  std::vector<Device> devices_;
  std::unordered_map<std::string, std::size_t> index_;
};

class ServiceCatalog {
 public:
  void add(ServiceSignature service);

  const ServiceSignature* find(std::string_view canonical) const;

  std::size_t size() const { return services_.size(); }
  bool empty() const { return services_.empty(); }
  std::span<const ServiceSignature> services() const { return services_; }
  auto begin() const { return services_.begin(); }
  auto end() const { return services_.end(); }

  friend bool operator==(const ServiceCatalog& a, const ServiceCatalog& b) {
    return a.services_ == b.services_;
  }

 private:
  std::vector<ServiceSignature> services_;
  std::unordered_map<std::string, std::size_t> index_;
};

using Params = std::vector<std::pair<std::string, Scalar>>;

// Unvalidated fields as they came off the wire.
struct RawAction {
  std::string service;
  std::string device;
  Params params;

  friend bool operator==(const RawAction&, const RawAction&) = default;
};

// A service call resolved against a catalog and registry. Params are in
// signature order.
struct ActionCall {
  ServiceSignature service;
  EntityId target_device;
  Params params;

  const Scalar* param(std::string_view name) const;

  friend bool operator==(const ActionCall&, const ActionCall&) = default;
};

enum class ValidationErrorKind {
  kUnknownService,
  kUnknownDevice,
  kDomainMismatch,
  kMissingParam,
  kUnexpectedParam,
};

std::string_view to_string(ValidationErrorKind kind);

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationErrorKind kind, std::string offending);

  ValidationErrorKind kind() const { return kind_; }
  // The service, device or parameter string that failed.
  const std::string& offending() const { return offending_; }

 private:
  ValidationErrorKind kind_;
  std::string offending_;
};

// Exact canonical-string lookup; no fuzzy matching. Checks run in the order
// service, device, domain, missing params, unexpected params.
ActionCall validate_action(const RawAction& raw, const ServiceCatalog& catalog,
                           const DeviceRegistry& registry);

}  // namespace edgeha

#endif  // EDGEHA_CORE_MODEL_HPP_
