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

#include <numeric>
#include <set>

#include "edgeha/action_parser.hpp"
#include "edgeha/reference_home.hpp"
#include "edgeha/synth.hpp"

using namespace edgeha;

TEST_CASE("class quota follows the inventory proportions") {
  const auto q = class_quota(28025);
  for (const auto& c : reference::class_inventory()) CHECK(q.at(std::string(c.service)) == c.total);
  const auto small = class_quota(2000);
  std::size_t sum = 0;
  for (const auto& [label, n] : small) sum += n;
  CHECK(sum == 2000);
  CHECK(small.at("light.turn_on") > small.at("cover.open"));
  const auto floored = class_quota(100, 2);
  for (const auto& [label, n] : floored) CHECK(n >= 2);
}

TEST_CASE("synthetic corpus is valid, unique and deterministic") {
  SynthOptions opts;
  opts.samples = 500;
  opts.seed = 9;
  opts.multi_intent_fraction = 0.1;
  const auto a = synth_corpus(opts);
  const auto b = synth_corpus(opts);
  CHECK(a.size() == 500);
  CHECK(a == b);
  std::set<std::pair<std::string, std::string>> prompts;
  std::size_t multi = 0;
  for (const auto& s : a) {
    prompts.insert({s.system_text, s.user_text});
    multi += s.multi_intent();
    const auto out = parse_assistant_output(s.gold_text, s.context.catalog, s.context.registry);
    CHECK(out.outcome == Outcome::kOk);
    CHECK(out.raw_action == s.gold_action);
    CHECK(s.context.registry.size() >= 1 + opts.distractors);
    CHECK(render_system_prompt(s.context) == s.system_text);
  }
  CHECK(prompts.size() == a.size());
  CHECK(multi >= 40);
  CHECK(multi <= 60);

  opts.seed = 10;
  CHECK(synth_corpus(opts) != a);
}
