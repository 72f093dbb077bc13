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


#include "edgeha/corruption.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "edgeha/action_parser.hpp"
#include "edgeha/random.hpp"

namespace edgeha {

std::string_view to_string(Corruption c) {
  switch (c) {
    case Corruption::kDropClosingFence: return "DropClosingFence";
    case Corruption::kDeleteBrace: return "DeleteBrace";
    case Corruption::kRenameDevice: return "RenameDevice";
    case Corruption::kSwapServiceDomain: return "SwapServiceDomain";
    case Corruption::kRemoveServiceKey: return "RemoveServiceKey";
  }
  return "Unknown";
}

ErrorClass designated_error(Corruption c) {
  switch (c) {
    case Corruption::kDropClosingFence: return ErrorClass::kNoActionBlock;
    case Corruption::kDeleteBrace: return ErrorClass::kMalformedJson;
    case Corruption::kRenameDevice: return ErrorClass::kUnknownDevice;
    case Corruption::kSwapServiceDomain: return ErrorClass::kDomainMismatch;
    case Corruption::kRemoveServiceKey: return ErrorClass::kMissingField;
  }
  return ErrorClass::kCorrect;
}

std::optional<std::string> corrupt(const ConversationSample& sample, Corruption c) {
  const RawAction& gold = sample.gold_action;
  switch (c) {
    case Corruption::kDropClosingFence: {
      std::string text = format_assistant_text(sample.gold_response, gold);
      text.resize(text.size() - kFence.size() - 1);
      return text;
    }
    case Corruption::kDeleteBrace: {
      std::string text = format_assistant_text(sample.gold_response, gold);
      const auto open = text.find(kActionFenceOpen);
      text.erase(text.find('{', open), 1);
      return text;
    }
    case Corruption::kRenameDevice: {
      RawAction mutated = gold;
      do {
        mutated.device += "_gone";
      } while (sample.context.registry.find(mutated.device) != nullptr);
      return format_assistant_text(sample.gold_response, mutated);
    }
    case Corruption::kSwapServiceDomain: {
      const auto dot = gold.device.find('.');
      const std::string domain = gold.device.substr(0, dot);
      for (const auto& s : sample.context.catalog) {
        if (s.domain != domain) {
          RawAction mutated = gold;
          mutated.service = s.canonical();
          return format_assistant_text(sample.gold_response, mutated);
        }
      }
      return std::nullopt;
    }
    case Corruption::kRemoveServiceKey: {
      nlohmann::ordered_json body;
      body["target_device"] = gold.device;
      for (const auto& [name, value] : gold.params) {
        if (const double* d = std::get_if<double>(&value)) {
          body[name] = *d;
        } else {
          body[name] = std::get<std::string>(value);
        }
      }
      return sample.gold_response + "\n" + std::string(kActionFenceOpen) + "\n" +
             body.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n" +
             std::string(kFence);
    }
  }
  return std::nullopt;
}

InjectionPlan inject_corruptions(std::span<const ConversationSample> samples, double rate,
                                 std::uint64_t seed, std::span<const Corruption> kinds) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must lie in [0, 1]");
  if (kinds.empty()) throw std::invalid_argument("no corruption kinds given");
  InjectionPlan plan;
  for (const auto& s : samples) plan.outputs.push_back(s.gold_text);
  const auto target =
      static_cast<std::size_t>(std::floor(rate * static_cast<double>(samples.size()) + 0.5));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  shuffle(order, rng);
  for (std::size_t i : order) {
    if (plan.injections.size() == target) break;
    const Corruption kind = kinds[plan.injections.size() % kinds.size()];
    if (auto text = corrupt(samples[i], kind)) {
      plan.outputs[i] = std::move(*text);
      plan.injections.push_back({i, kind});
      ++plan.counts[kind];
    }
  }
  return plan;
}

std::unique_ptr<ScriptedBackend> script_outputs(std::span<const ConversationSample> samples,
                                                std::span<const std::string> outputs) {
  if (samples.size() != outputs.size()) {
    throw std::invalid_argument("samples and outputs differ in length");
  }
  auto script = std::make_unique<ScriptedBackend>();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    script->add(samples[i].system_text, samples[i].user_text, outputs[i]);
  }
  return script;
}

}  // namespace edgeha
