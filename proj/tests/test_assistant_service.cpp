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

#include <cstdio>
#include <set>
#include <thread>
#include <vector>

#include <json.hpp>

#include "edgeha/assistant_service.hpp"
#include "edgeha/reference_home.hpp"

using namespace edgeha;

namespace {

std::shared_ptr<BackendHandle> backend(BackendConfig config = {}) {
  auto script = std::make_unique<ScriptedBackend>("I am not sure.");
  script->add(std::string(reference::kUserText), std::string(reference::kAssistantText));
  script->add("lock it",
              "Locking.\n```homeassistant\n{\"service\": \"lock.lock\", \"target_device\": "
              "\"lock.office_cabinet\"}\n```");
  script->add("break it",
              "Sure.\n```homeassistant\n{\"service\": \"cover.toggle\", \"target_device\": "
              "\"cover.garage\"}\n```");
  return load_scripted_backend(config, std::move(script)).handle;
}

std::string state_of(const AssistantService& s, const std::string& id, const std::string& device) {
  for (const auto& d : s.get_devices(id)) {
    if (d.id.str() == device) return d.state.primary_state;
  }
  return "";
}

class ThrowingBackend : public Backend {
 public:
  std::string id() const override { return "down"; }
  std::string complete(const GenerationRequest&) override {
    throw BackendError(BackendErrorKind::kBackendUnavailable, "runtime is down");
  }
};

}  // namespace

TEST_CASE("reference command flips the cover from closed to open") {
  AssistantService service(backend());
  const std::string id = service.create_session("");
  CHECK(state_of(service, id, "cover.master_bedroom") == "closed");
  const ChatResponse r = service.handle_chat(id, reference::kUserText);
  CHECK(r.outcome == ChatOutcome::kOk);
  CHECK(r.response_text == reference::kResponseText);
  REQUIRE(r.action);
  CHECK(r.action->service.canonical() == "cover.toggle");
  CHECK(r.prior_state->primary_state == "closed");
  CHECK(r.new_state->primary_state == "open");
  CHECK(r.event_sequence == 0u);
  CHECK(state_of(service, id, "cover.master_bedroom") == "open");
  CHECK(service.events(id, 0).size() == 1);
  CHECK(service.history(id).size() == 1);

  const auto j = to_json(r);
  CHECK(j["outcome"] == "Ok");
  CHECK(j["new_state"]["state"] == "open");
  CHECK(j["action"]["target_device"] == "cover.master_bedroom");
}

TEST_CASE("output without an action block falls back and leaves the home alone") {
  AssistantService service(backend());
  const std::string id = service.create_session("");
  const auto before = service.get_devices(id);
  const ChatResponse r = service.handle_chat(id, "what's up");
  CHECK(r.outcome == ChatOutcome::kFallback);
  CHECK(r.response_text == kFallbackText);
  CHECK(r.reason == "NoActionBlock");
  CHECK_FALSE(r.action);
  CHECK(service.get_devices(id) == before);
  CHECK(service.events(id, 0).empty());
  CHECK(service.history(id).size() == 1);
}

TEST_CASE("an unknown device falls back with its class") {
  AssistantService service(backend());
  const std::string id = service.create_session("");
  const auto r = service.handle_chat(id, "break it");
  CHECK(r.outcome == ChatOutcome::kFallback);
  CHECK(r.reason == "UnknownDevice");
}

TEST_CASE("sessions are isolated") {
  AssistantService service(backend());
  const std::string a = service.create_session("");
  const std::string b = service.create_session("");
  CHECK(a != b);
  service.handle_chat(a, "lock it");
  CHECK(state_of(service, a, "lock.office_cabinet") == "locked");
  CHECK(state_of(service, b, "lock.office_cabinet") == "unlocked");
  CHECK(service.session_count() == 2);
}

TEST_CASE("service errors") {
  AssistantService service(backend());
  const std::string id = service.create_session("");
  const auto kind_of = [&](auto&& f) {
    try {
      f();
    } catch (const ServiceError& e) {
      return e.kind();
    }
    FAIL("expected a ServiceError");
    return ServiceErrorKind::kBadRequest;
  };
  CHECK(kind_of([&] { service.handle_chat("nope", "hi"); }) == ServiceErrorKind::kUnknownSession);
  CHECK(kind_of([&] { service.handle_chat(id, "  "); }) == ServiceErrorKind::kEmptyUtterance);
  CHECK(kind_of([&] { service.get_devices("nope"); }) == ServiceErrorKind::kUnknownSession);
  CHECK(kind_of([&] { service.create_session("Services: light.blink()\nDevices: light.a 'A' = on"); }) ==
        ServiceErrorKind::kInvalidHomeConfig);
  CHECK(kind_of([&] { service.create_session("Services: nonsense"); }) ==
        ServiceErrorKind::kInvalidHomeConfig);
  CHECK(kind_of([&] { service.create_session(R"({"services": 3})"); }) ==
        ServiceErrorKind::kInvalidHomeConfig);

  auto down = std::make_shared<BackendHandle>(std::make_unique<ThrowingBackend>(), BackendConfig{});
  AssistantService broken(down);
  const std::string bid = broken.create_session("");
  CHECK(kind_of([&] { broken.handle_chat(bid, "hi"); }) == ServiceErrorKind::kBackendUnavailable);
}

TEST_CASE("context overflow is a fallback") {
  BackendConfig small;
  small.max_sequence_tokens = 20;
  AssistantService service(backend(small));
  const std::string id = service.create_session("");
  const auto r = service.handle_chat(id, reference::kUserText);
  CHECK(r.outcome == ChatOutcome::kFallback);
  CHECK(r.reason == "ContextOverflow");
  CHECK(state_of(service, id, "cover.master_bedroom") == "closed");
}

TEST_CASE("home configs in every accepted shape") {
  const SystemContext home = reference::default_home();
  CHECK(parse_home_config("") == home);
  CHECK(parse_home_config("{}") == home);
  CHECK(parse_home_config(reference::kSystemText) == home);
  CHECK(parse_home_config(nlohmann::json{{"system_prompt", reference::kSystemText}}.dump()) == home);
  const auto structured = parse_home_config(R"json({
    "services": ["light.turn_on()", "light.turn_off"],
    "devices": [{"id": "light.desk", "name": "Desk lamp", "state": "off",
                 "attributes": {"brightness": 40}}]})json");
  CHECK(structured.catalog.size() == 2);
  REQUIRE(structured.registry.size() == 1);
  CHECK(structured.registry.devices()[0].friendly_name == "Desk lamp");
  CHECK(structured.preamble == kDefaultPreamble);
}

TEST_CASE("snapshots restore each session's current home") {
  AssistantService service(backend());
  const std::string id = service.create_session("");
  service.handle_chat(id, reference::kUserText);
  const std::string snap = service.snapshot();

  AssistantService restored(backend());
  restored.restore(snap);
  CHECK(restored.session_count() == 1);
  CHECK(restored.get_devices(id) == service.get_devices(id));
  CHECK(restored.events(id, 0).empty());
  CHECK(restored.snapshot() == snap);

  const std::string path = "edgeha_test_sessions.json";
  service.save_snapshot(path);
  AssistantService loaded(backend());
  loaded.load_snapshot(path);
  std::remove(path.c_str());
  CHECK(loaded.get_devices(id) == service.get_devices(id));
  CHECK_THROWS_AS(loaded.restore("{\"format\": \"other\"}"), ServiceError);
}

TEST_CASE("concurrent chats on one session serialize") {
  AssistantService service(backend());
  const std::string id = service.create_session("");
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 25; ++i) service.handle_chat(id, reference::kUserText);
    });
  }
  for (auto& t : threads) t.join();
  const auto events = service.events(id, 0);
  CHECK(events.size() == 100);
  std::set<std::uint64_t> seq;
  for (const auto& e : events) seq.insert(e.sequence);
  CHECK(seq.size() == 100);
  CHECK(state_of(service, id, "cover.master_bedroom") == "closed");
  CHECK(service.history(id).size() == 100);
}

TEST_CASE("config reports the backend") {
  AssistantService service(backend());
  service.create_session("");
  const auto c = service.config();
  CHECK(c["sessions"] == 1);
  CHECK(c["backend"] == "scripted");
  CHECK(c.contains("max_sequence_tokens"));
}
