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


#include <doctest.h>

#include <string>

#include "edgeha/action_parser.hpp"
#include "edgeha/random.hpp"
#include "edgeha/reference_home.hpp"

using namespace edgeha;

namespace {

const SystemContext& home() {
  static const SystemContext ctx = reference::default_home();
  return ctx;
}

AssistantOutput parse(std::string_view raw) {
  return parse_assistant_output(raw, home().catalog, home().registry);
}

std::string fenced(std::string_view json) {
  return "ok\n```homeassistant\n" + std::string(json) + "\n```";
}

}  // namespace

TEST_CASE("reference assistant turn parses to cover.toggle") {
  const AssistantOutput out = parse(reference::kAssistantText);
  CHECK(out.outcome == Outcome::kOk);
  REQUIRE(out.action);
  CHECK(out.action->service.canonical() == "cover.toggle");
  CHECK(out.action->target_device.str() == "cover.master_bedroom");
  CHECK(out.response_text == reference::kResponseText);
  CHECK(out.block_count == 1);
}

TEST_CASE("outcome classes") {
  CHECK(parse("just text").outcome == Outcome::kNoActionBlock);
  CHECK(parse("text\n```homeassistant\n{}").outcome == Outcome::kNoActionBlock);
  CHECK(parse("```homeassistantx\n{}\n```").outcome == Outcome::kNoActionBlock);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "target_device": )")).outcome ==
        Outcome::kMalformedJson);
  CHECK(parse(fenced(R"({'service': 'cover.toggle'})")).outcome == Outcome::kMalformedJson);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "target_device": "cover.master_bedroom",})"))
            .outcome == Outcome::kMalformedJson);
  CHECK(parse(fenced(R"([1, 2])")).outcome == Outcome::kMalformedJson);
  CHECK(parse(fenced(R"({"service": 3, "target_device": "cover.master_bedroom"})")).outcome ==
        Outcome::kMalformedJson);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "service": "cover.toggle",
                          "target_device": "cover.master_bedroom"})"))
            .outcome == Outcome::kMalformedJson);
  CHECK(parse(fenced(R"({"target_device": "cover.master_bedroom"})")).outcome ==
        Outcome::kMissingField);
  CHECK(parse(fenced(R"({"service": "cover.toggle"})")).outcome == Outcome::kMissingField);
  CHECK(parse(fenced(R"({"service": "cover.fly", "target_device": "cover.master_bedroom"})"))
            .outcome == Outcome::kUnknownService);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "target_device": "cover.garage"})")).outcome ==
        Outcome::kUnknownDevice);
  CHECK(parse(fenced(R"({"service": "lock.lock", "target_device": "cover.master_bedroom"})"))
            .outcome == Outcome::kDomainMismatch);
  CHECK(parse(fenced(R"({"service": "timer.start", "target_device": "timer.kitchen_oven"})"))
            .outcome == Outcome::kMissingParam);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "target_device": "cover.master_bedroom",
                          "speed": 3})"))
            .outcome == Outcome::kUnexpectedParam);
  CHECK(parse(fenced(R"({"service": "Cover.Toggle", "target_device": "cover.master_bedroom"})"))
            .outcome == Outcome::kUnknownService);
}

TEST_CASE("a light service on a home without lights is an unknown device") {
  SystemContext ctx = reference::default_home();
  ctx.catalog.add(ServiceSignature::parse("light.turn_on()"));
  const auto out = parse_assistant_output(
      fenced(R"({"service": "light.turn_on", "target_device": "light.kitchen"})"), ctx.catalog,
      ctx.registry);
  // Oracle: no registered device has the light domain.
  bool has_light = false;
  for (const auto& d : ctx.registry) has_light = has_light || d.id.domain() == "light";
  CHECK_FALSE(has_light);
  CHECK(out.outcome == Outcome::kUnknownDevice);
  REQUIRE(out.raw_action);
  CHECK(out.raw_action->device == "light.kitchen");
}

TEST_CASE("device key variants") {
  CHECK(parse(fenced(R"({"service": "cover.toggle", "device": "cover.master_bedroom"})")).outcome ==
        Outcome::kOk);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "device": "cover.master_bedroom",
                          "target_device": "cover.master_bedroom"})"))
            .outcome == Outcome::kOk);
  CHECK(parse(fenced(R"({"service": "cover.toggle", "device": "cover.master_bedroom",
                          "target_device": "lock.office_cabinet"})"))
            .outcome == Outcome::kMalformedJson);
}

TEST_CASE("only the first block is parsed") {
  const std::string raw = std::string(reference::kAssistantText) +
                          "\nand also\n```homeassistant\n{\"service\": \"lock.lock\"}\n```";
  const auto out = parse(raw);
  CHECK(out.outcome == Outcome::kOk);
  CHECK(out.block_count == 2);
  CHECK(out.action->service.canonical() == "cover.toggle");
}

TEST_CASE("params are carried through") {
  const auto out = parse(fenced(
      R"({"service": "timer.start", "target_device": "timer.kitchen_oven", "duration": "00:05:00"})"));
  REQUIRE(out.outcome == Outcome::kOk);
  REQUIRE(out.action->param("duration"));
  CHECK(std::get<std::string>(*out.action->param("duration")) == "00:05:00");
}

TEST_CASE("format then parse returns the same action") {
  const RawAction action{"timer.start", "timer.kitchen_oven", {{"duration", std::string("00:01:00")}}};
  for (const char* key : {"target_device", "device"}) {
    const auto out = parse(format_assistant_text("starting", action, key));
    CHECK(out.outcome == Outcome::kOk);
    CHECK(out.raw_action == action);
    CHECK(out.response_text == "starting");
  }
}

TEST_CASE("parser is total over random inputs") {
  SplitMix64 rng(7);
  const std::string seed_text(reference::kAssistantText);
  static constexpr std::string_view kAlphabet = "{}[]\":,` \nabc.homeassistant_01\\\xff";
  std::size_t parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string raw;
    switch (rng.below(3)) {
      case 0: {
        const std::size_t n = rng.below(200);
        for (std::size_t k = 0; k < n; ++k) raw += static_cast<char>(rng.below(256));
        break;
      }
      case 1: {
        raw = seed_text;
        const std::size_t edits = 1 + rng.below(4);
        for (std::size_t k = 0; k < edits && !raw.empty(); ++k) {
          raw[rng.below(raw.size())] = kAlphabet[rng.below(kAlphabet.size())];
        }
        break;
      }
      default: {
        raw = "```homeassistant\n";
        const std::size_t n = rng.below(80);
        for (std::size_t k = 0; k < n; ++k) raw += kAlphabet[rng.below(kAlphabet.size())];
        if (rng.below(2)) raw += "\n```";
      }
    }
    CHECK_NOTHROW(parse(raw));
    ++parsed;
  }
  CHECK(parsed == 20000);
  const std::string big(1 << 20, '{');
  CHECK_NOTHROW(parse("```homeassistant\n" + big.substr(0, big.size() - 32) + "\n```"));
}

TEST_CASE("single-character device mutations never resolve to another device") {
  const std::string gold = "cover.master_bedroom";
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789_.\"\\ ";
  for (std::size_t pos = 0; pos < gold.size(); ++pos) {
    for (char c : kAlphabet) {
      if (c == gold[pos]) continue;
      std::string device = gold;
      device[pos] = c;
      const std::string raw = "x\n```homeassistant\n{\"service\": \"cover.toggle\", "
                              "\"target_device\": \"" + device + "\"}\n```";
      const auto out = parse(raw);
      const bool allowed = out.outcome == Outcome::kUnknownDevice ||
                           out.outcome == Outcome::kMalformedJson;
      CHECK_MESSAGE(allowed, device, " -> ", to_string(out.outcome));
    }
  }
}
