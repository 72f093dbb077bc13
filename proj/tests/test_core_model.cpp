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

#include "edgeha/core_model.hpp"

using namespace edgeha;

TEST_CASE("scalars keep numbers only when they round-trip") {
  CHECK(std::get<double>(parse_scalar("0.88")) == 0.88);
  CHECK(std::get<double>(parse_scalar("21")) == 21.0);
  CHECK(std::get<std::string>(parse_scalar("0.880")) == "0.880");
  CHECK(std::get<std::string>(parse_scalar("00:05:00")) == "00:05:00");
  CHECK(std::get<std::string>(parse_scalar("nan")) == "nan");
  CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
  CHECK(format_scalar(Scalar{1.5}) == "1.5");
}

TEST_CASE("entity ids") {
  const EntityId id = parse_entity_id("  cover.master_bedroom ");
  CHECK(id.domain() == "cover");
  CHECK(id.object_id() == "master_bedroom");
  CHECK(id.str() == "cover.master_bedroom");
  CHECK_THROWS_AS(parse_entity_id("cover"), ModelError);
  CHECK_THROWS_AS(parse_entity_id("Cover.x"), ModelError);
  CHECK_THROWS_AS(parse_entity_id("cover.x.y"), ModelError);
  CHECK_THROWS_AS(parse_entity_id("cover."), ModelError);
}

TEST_CASE("service signatures") {
  const auto s = ServiceSignature::parse("timer.start(duration)");
  CHECK(s.domain == "timer");
  CHECK(s.name == "start");
  REQUIRE(s.params.size() == 1);
  CHECK(s.display() == "timer.start(duration)");
  CHECK(ServiceSignature::parse("light.turn_on").display() == "light.turn_on()");
  CHECK(ServiceSignature::parse("light.turn_on()") == ServiceSignature::make("light", "turn_on"));
  CHECK_THROWS_AS(ServiceSignature::parse("light.turn_on(a,a)"), ModelError);
  CHECK_THROWS_AS(ServiceSignature::parse("light"), ModelError);
}

TEST_CASE("legal states per domain") {
  CHECK(is_legal_state("light", "on"));
  CHECK_FALSE(is_legal_state("light", "dim"));
  CHECK(is_legal_state("cover", "opening"));
  CHECK(is_legal_state("vacuum", "docked"));
  CHECK(is_legal_state("climate", "heat_cool"));
  CHECK_FALSE(is_legal_state("climate", "two words"));
  DeviceState loud{"on", {{"vol", 1.5}}};
  CHECK_THROWS_AS(check_state("media_player", loud), ModelError);
  DeviceState fine{"on", {{"vol", 1.0}}};
  CHECK_NOTHROW(check_state("media_player", fine));
}

TEST_CASE("registry keeps insertion order and rejects duplicates") {
  DeviceRegistry r;
  r.add({parse_entity_id("light.b"), "B", {"on", {}}});
  r.add({parse_entity_id("light.a"), "A", {"off", {}}});
  CHECK(r.devices()[0].id.str() == "light.b");
  CHECK_THROWS_AS(r.add({parse_entity_id("light.a"), "A2", {"off", {}}}), ModelError);
  CHECK_THROWS_AS(r.add({parse_entity_id("light.c"), "C", {"dim", {}}}), ModelError);
  CHECK(r.find("light.a") != nullptr);
  CHECK(r.remove(parse_entity_id("light.a")));
  CHECK(r.find("light.a") == nullptr);
  CHECK_THROWS_AS(r.set_state(parse_entity_id("light.a"), {"on", {}}), ModelError);
}

TEST_CASE("validation order and errors") {
  ServiceCatalog c;
  c.add(ServiceSignature::parse("light.turn_on()"));
  c.add(ServiceSignature::parse("timer.start(duration)"));
  DeviceRegistry r;
  r.add({parse_entity_id("light.kitchen"), "Kitchen", {"off", {}}});
  r.add({parse_entity_id("timer.oven"), "Oven", {"idle", {}}});

  const auto kind_of = [&](const RawAction& a) {
    try {
      validate_action(a, c, r);
    } catch (const ValidationError& e) {
      return std::string(to_string(e.kind())) + ":" + e.offending();
    }
    return std::string("ok");
  };
  CHECK(kind_of({"light.turn_on", "light.kitchen", {}}) == "ok");
  CHECK(kind_of({" light.turn_on ", " light.kitchen", {}}) == "ok");
  CHECK(kind_of({"light.turn_of", "light.nowhere", {}}) == "UnknownService:light.turn_of");
  CHECK(kind_of({"light.turn_on", "light.nowhere", {}}) == "UnknownDevice:light.nowhere");
  CHECK(kind_of({"light.turn_on", "timer.oven", {}}) == "DomainMismatch:light.turn_on -> timer.oven");
  CHECK(kind_of({"timer.start", "timer.oven", {}}) == "MissingParam:duration");
  CHECK(kind_of({"light.turn_on", "light.kitchen", {{"brightness", 3.0}}}) ==
        "UnexpectedParam:brightness");
  const ActionCall call =
      validate_action({"timer.start", "timer.oven", {{"duration", std::string("00:01:00")}}}, c, r);
  REQUIRE(call.param("duration"));
  CHECK(std::get<std::string>(*call.param("duration")) == "00:01:00");
}
