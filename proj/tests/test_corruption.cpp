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

#include <set>

#include "edgeha/action_parser.hpp"
#include "edgeha/corruption.hpp"
#include "edgeha/synth.hpp"

using namespace edgeha;

namespace {

const std::vector<ConversationSample>& corpus() {
  static const std::vector<ConversationSample> samples = [] {
    SynthOptions opts;
    opts.samples = 400;
    opts.seed = 17;
    return synth_corpus(opts);
  }();
  return samples;
}

ErrorClass class_of(const ConversationSample& s, const std::string& text) {
  return classify(parse_assistant_output(text, s.context.catalog, s.context.registry),
                  s.gold_action);
}

}  // namespace

TEST_CASE("every corruption yields its designated error class on every sample") {
  for (Corruption c : kCorruptions) {
    std::size_t applied = 0;
    for (const auto& s : corpus()) {
      const auto text = corrupt(s, c);
      if (!text) continue;
      ++applied;
      CHECK_MESSAGE(class_of(s, *text) == designated_error(c), to_string(c), "\n", *text);
    }
    CHECK(applied == corpus().size());
  }
  CHECK(designated_error(Corruption::kDropClosingFence) == ErrorClass::kNoActionBlock);
  CHECK(designated_error(Corruption::kDeleteBrace) == ErrorClass::kMalformedJson);
  CHECK(designated_error(Corruption::kRenameDevice) == ErrorClass::kUnknownDevice);
  CHECK(designated_error(Corruption::kSwapServiceDomain) == ErrorClass::kDomainMismatch);
  CHECK(designated_error(Corruption::kRemoveServiceKey) == ErrorClass::kMissingField);
}

TEST_CASE("injection plans hit the requested rate with balanced kinds") {
  const auto plan = inject_corruptions(corpus(), 0.10, 5);
  REQUIRE(plan.outputs.size() == corpus().size());
  CHECK(plan.injections.size() == 40);
  for (Corruption c : kCorruptions) CHECK(plan.counts.at(c) == 8);
  std::set<std::size_t> injected;
  for (const auto& inj : plan.injections) {
    injected.insert(inj.index);
    CHECK(class_of(corpus()[inj.index], plan.outputs[inj.index]) == designated_error(inj.kind));
  }
  CHECK(injected.size() == 40);
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    if (!injected.count(i)) CHECK(plan.outputs[i] == corpus()[i].gold_text);
  }
  const auto again = inject_corruptions(corpus(), 0.10, 5);
  CHECK(again.outputs == plan.outputs);
  CHECK(inject_corruptions(corpus(), 0.0, 5).injections.empty());
  CHECK_THROWS(inject_corruptions(corpus(), 1.5, 5));
}
