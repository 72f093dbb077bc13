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


// Deterministic synthetic conversation corpus with the published class
// mix, used when the original dataset is not at hand.

#ifndef EDGEHA_SYNTH_HPP_
#define EDGEHA_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edgeha/dataset.hpp"
#include "edgeha/prompt_codec.hpp"

namespace edgeha {

struct SynthOptions {
  // Total samples, apportioned over the 38 inventory classes in proportion
  // to their published totals (largest remainder).
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  // Share of samples carrying a second action.
  double multi_intent_fraction = 0.0;
  // Devices per home besides the target.
  std::size_t distractors = 4;
  // Minimum samples per class.
  std::size_t min_per_class = 0;
};

// Per-class sample counts for `total`. At the published total this is the
// published inventory.
std::map<std::string, std::size_t> class_quota(std::size_t total, std::size_t min_per_class = 0);

// Three-turn conversations with unique (system, user) pairs.
std::vector<PromptDocument> synth_conversations(const SynthOptions& options);

// The same conversations loaded as samples.
std::vector<ConversationSample> synth_corpus(const SynthOptions& options);

}  // namespace edgeha

#endif  // EDGEHA_SYNTH_HPP_
