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

// The reference home used as the service default, and the published class
// inventory of the home-assistant requests corpus.

#ifndef EDGEHA_REFERENCE_HOME_HPP_
#define EDGEHA_REFERENCE_HOME_HPP_

#include <cstddef>
#include <span>
#include <string_view>

#include "edgeha/core_model.hpp"
#include "edgeha/prompt_codec.hpp"

namespace edgeha::reference {

// System turn of the reference conversation, six devices and 28 services.
extern const std::string_view kSystemText;
inline constexpr std::string_view kUserText = "reverse the master bedroom blinds";
inline constexpr std::string_view kResponseText = "switching Master Bedroom state as requested";
extern const std::string_view kAssistantText;

SystemContext default_home();

struct ClassCount {
  std::string_view service;
  std::size_t total;
  std::size_t test;
};

// Per-class totals and held-out test counts, 38 classes.
std::span<const ClassCount> class_inventory();

// Signature of every service with built-in behaviour: the 38 inventory
// classes plus the *_cover, play_pause, toggle and timer.pause variants used
// in system prompts.
ServiceCatalog builtin_catalog();

}  // namespace edgeha::reference

#endif  // EDGEHA_REFERENCE_HOME_HPP_
