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
#include <fstream>
#include <string>

#include <json.hpp>

#include "edgeha/dataset.hpp"
#include "edgeha/reference_home.hpp"
#include "edgeha/synth.hpp"

using namespace edgeha;

namespace {

nlohmann::json reference_record() {
  return nlohmann::json::array({{{"from", "system"}, {"value", reference::kSystemText}},
                                {{"from", "user"}, {"value", reference::kUserText}},
                                {{"from", "assistant"}, {"value", reference::kAssistantText}}});
}

}  // namespace

TEST_CASE("the reference record loads as a cover.toggle sample") {
  const Dataset d = parse_dataset(nlohmann::json::array({reference_record()}).dump());
  REQUIRE(d.samples.size() == 1);
  CHECK(d.quarantined.empty());
  const auto& s = d.samples[0];
  CHECK(s.class_label == "cover.toggle");
  CHECK(s.gold_action == RawAction{"cover.toggle", "cover.master_bedroom", {}});
  CHECK(s.gold_response == reference::kResponseText);
  CHECK(s.user_text == reference::kUserText);
  CHECK_FALSE(s.multi_intent());
  CHECK(s.context.registry.size() == 6);
}

TEST_CASE("accepted container shapes") {
  const auto rec = reference_record();
  CHECK(parse_dataset(rec.dump()).samples.size() == 1);
  CHECK(parse_dataset(nlohmann::json{{"conversations", rec}}.dump()).samples.size() == 1);
  CHECK(parse_dataset(rec.dump() + "\n\n" + rec.dump() + "\n").samples.size() == 2);
  CHECK(parse_dataset("").samples.empty());
  CHECK(parse_dataset("  \n ").samples.empty());
  CHECK(parse_dataset("[]").samples.empty());
  try {
    parse_dataset("this is not json");
    FAIL("expected SchemaViolation");
  } catch (const DatasetError& e) {
    CHECK(e.kind() == DatasetErrorKind::kSchemaViolation);
  }
}

TEST_CASE("bad records are quarantined with their error class") {
  auto missing_assistant = reference_record();
  missing_assistant.erase(2);
  auto illegal_state = reference_record();
  std::string system = illegal_state[0]["value"];
  system.replace(system.find("= closed"), 8, "= ajar");
  illegal_state[0]["value"] = system;
  auto no_fence = reference_record();
  no_fence[2]["value"] = "nothing to do";
  auto bad_role = reference_record();
  bad_role[1]["from"] = "robot";

  const auto doc =
      nlohmann::json::array({missing_assistant, reference_record(), illegal_state, no_fence, bad_role});
  const Dataset d = parse_dataset(doc.dump());
  CHECK(d.samples.size() == 1);
  REQUIRE(d.quarantined.size() == 4);
  CHECK(d.quarantined[0].index == 0);
  CHECK(d.quarantined[0].error_class == "SchemaViolation");
  CHECK(d.quarantined[1].index == 2);
  CHECK(d.quarantined[1].error_class == "MalformedDeviceLine");
  CHECK(d.quarantined[2].error_class == "NoActionBlock");
  CHECK(d.quarantined[3].error_class == "SchemaViolation");
}

TEST_CASE("multi-intent records are flagged") {
  auto rec = reference_record();
  rec[2]["value"] = std::string(reference::kAssistantText) +
                    "\n```homeassistant\n{\"service\": \"lock.lock\", \"target_device\": "
                    "\"lock.office_cabinet\"}\n```";
  const Dataset d = parse_dataset(rec.dump());
  REQUIRE(d.samples.size() == 1);
  CHECK(d.samples[0].multi_intent());
  CHECK(d.multi_intent_count() == 1);
  CHECK(d.samples[0].class_label == "cover.toggle");
}

TEST_CASE("export then load reproduces the samples") {
  SynthOptions opts;
  opts.samples = 150;
  opts.seed = 3;
  opts.multi_intent_fraction = 0.1;
  const auto samples = synth_corpus(opts);
  const std::string path = "edgeha_test_export.json";
  export_training_corpus(samples, path);
  const Dataset back = load_dataset(path);
  std::remove(path.c_str());
  CHECK(back.quarantined.empty());
  CHECK(back.samples == samples);
  CHECK(dump_corpus(back.samples) == dump_corpus(samples));

  CHECK_THROWS_AS(load_dataset("does/not/exist.json"), DatasetError);
  CHECK_THROWS_AS(export_training_corpus(samples, "/nonexistent_dir/x.json"), DatasetError);
}

TEST_CASE("class labels keep first-seen order") {
  SynthOptions opts;
  opts.samples = 100;
  opts.min_per_class = 1;
  const auto samples = synth_corpus(opts);
  const auto labels = class_labels(samples);
  CHECK(labels.size() == 38);
  CHECK(labels.front() == samples.front().class_label);
}
