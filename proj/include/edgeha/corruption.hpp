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


// Targeted mutations of gold assistant outputs, each designed to land in
// one evaluation error class.

#ifndef EDGEHA_CORRUPTION_HPP_
#define EDGEHA_CORRUPTION_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgeha/dataset.hpp"
#include "edgeha/evaluation.hpp"
#include "edgeha/inference_backend.hpp"

namespace edgeha {

enum class Corruption {
  kDropClosingFence,
  kDeleteBrace,
  kRenameDevice,
  kSwapServiceDomain,
  kRemoveServiceKey,
};

inline constexpr std::array<Corruption, 5> kCorruptions = {
    Corruption::kDropClosingFence, Corruption::kDeleteBrace, Corruption::kRenameDevice,
    Corruption::kSwapServiceDomain, Corruption::kRemoveServiceKey};

std::string_view to_string(Corruption c);

// NoActionBlock, MalformedJson, UnknownDevice, DomainMismatch, MissingField.
ErrorClass designated_error(Corruption c);

// Corrupted assistant text for the sample, or nullopt when the home offers
// no way to apply it (e.g. a single-domain catalog for a domain swap).
std::optional<std::string> corrupt(const ConversationSample& sample, Corruption c);

struct Injection {
  std::size_t index = 0;
  Corruption kind = Corruption::kDropClosingFence;
};

struct InjectionPlan {
  // One assistant text per sample: gold, or corrupted for injected indices.
  std::vector<std::string> outputs;
  std::vector<Injection> injections;
  std::map<Corruption, std::size_t> counts;
};

// Corrupts round(rate * N) samples picked by a seeded shuffle, cycling
// through `kinds`. Samples where a kind does not apply are passed over.
InjectionPlan inject_corruptions(std::span<const ConversationSample> samples, double rate,
                                 std::uint64_t seed,
                                 std::span<const Corruption> kinds = kCorruptions);

// Scripted backend answering sample i with outputs[i].
std::unique_ptr<ScriptedBackend> script_outputs(std::span<const ConversationSample> samples,
                                                std::span<const std::string> outputs);

}  // namespace edgeha

#endif  // EDGEHA_CORRUPTION_HPP_
