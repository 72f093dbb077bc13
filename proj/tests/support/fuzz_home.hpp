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


// Random homes over legal tokens for codec round-trip checks.

#ifndef EDGEHA_TESTS_SUPPORT_FUZZ_HOME_HPP_
#define EDGEHA_TESTS_SUPPORT_FUZZ_HOME_HPP_

#include <string>
#include <vector>

#include "edgeha/prompt_codec.hpp"
#include "edgeha/random.hpp"

namespace edgeha::testing {

inline const std::vector<std::string> kDomains = {"light", "switch",  "fan",  "cover",
                                                  "lock",  "timer",   "vacuum", "climate",
                                                  "todo",  "media_player"};

inline std::string token(SplitMix64& rng, std::size_t max_len = 8) {
  static constexpr std::string_view kHead = "abcdefghijklmnopqrstuvwxyz";
  static constexpr std::string_view kTail = "abcdefghijklmnopqrstuvwxyz0123456789_";
  std::string out(1, kHead[rng.below(kHead.size())]);
  const std::size_t n = rng.below(max_len);
  for (std::size_t i = 0; i < n; ++i) out += kTail[rng.below(kTail.size())];
  return out;
}

inline std::string friendly_name(SplitMix64& rng) {
  static constexpr std::string_view kChars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnop0123456789 '-";
  std::string out(1, 'A' + static_cast<char>(rng.below(26)));
  const std::size_t n = rng.below(20);
  for (std::size_t i = 0; i < n; ++i) out += kChars[rng.below(kChars.size())];
  while (out.back() == ' ') out.pop_back();
  return out;
}

inline DeviceState random_state(SplitMix64& rng, const std::string& domain) {
  DeviceState state;
  if (auto legal = legal_states(domain)) {
    state.primary_state = std::string((*legal)[rng.below(legal->size())]);
  } else {
    state.primary_state = token(rng);
  }
  const std::size_t attrs = rng.below(3);
  for (std::size_t i = 0; i < attrs; ++i) {
    const std::string key = i == 0 && domain == "media_player" ? "vol" : token(rng) + "_" + std::to_string(i);
    if (key == "vol") {
      state.attributes.set(key, static_cast<double>(rng.below(101)) / 100.0);
    } else if (rng.below(2)) {
      state.attributes.set(key, rng.uniform() * 1000.0 - 500.0);
    } else {
      state.attributes.set(key, "x" + token(rng));
    }
  }
  return state;
}

inline SystemContext random_context(SplitMix64& rng) {
  SystemContext ctx;
  if (rng.below(4) == 0) ctx.preamble = "Custom persona " + token(rng);
  const std::size_t services = 1 + rng.below(12);
  while (ctx.catalog.size() < services) {
    const std::string domain = kDomains[rng.below(kDomains.size())];
    const std::string name = token(rng);
    if (ctx.catalog.find(domain + "." + name)) continue;
    std::vector<std::string> params;
    const std::size_t p = rng.below(3);
    for (std::size_t i = 0; i < p; ++i) params.push_back(token(rng) + std::to_string(i));
    ctx.catalog.add(ServiceSignature::make(domain, name, params));
  }
  const std::size_t devices = 1 + rng.below(10);
  while (ctx.registry.size() < devices) {
    const std::string domain = kDomains[rng.below(kDomains.size())];
    EntityId id(domain, token(rng));
    if (ctx.registry.find(id)) continue;
    ctx.registry.add({id, friendly_name(rng), random_state(rng, domain)});
  }
  return ctx;
}


}  // namespace edgeha::testing

#endif  // EDGEHA_TESTS_SUPPORT_FUZZ_HOME_HPP_
