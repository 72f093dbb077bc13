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


// Seeded stratified train/test splitting.

#ifndef EDGEHA_SPLIT_HPP_
#define EDGEHA_SPLIT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgeha/dataset.hpp"

namespace edgeha {

struct SplitSpec {
  std::uint64_t seed = 0;
  // Exact test count per class. When non-empty, unlisted classes contribute
  // nothing to the test set and the fraction is ignored.
  std::map<std::string, std::size_t, std::less<>> per_class_test;
  // Otherwise round(fraction * N) test samples, apportioned over classes by
  // largest remainder (ties to the smaller label).
  double test_fraction = 0.2;
  // Minimum test count per class in fraction mode, capped at the class size.
  std::size_t floor = 0;
};

enum class SplitErrorKind { kInsufficientClassSize, kInvalidSpec };

class SplitError : public std::runtime_error {
 public:
  SplitError(SplitErrorKind kind, const std::string& message);
  SplitErrorKind kind() const { return kind_; }

 private:
  SplitErrorKind kind_;
};

struct SplitResult {
  // Ascending sample indices.
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::map<std::string, std::size_t, std::less<>> test_counts;
  // Hash of the seed, per-class counts and test membership.
  std::string fingerprint;
};

// Each class is shuffled by its own generator seeded from the spec seed and
// the label, so membership depends only on the seed and that class.
SplitResult stratified_split(std::span<const std::string> labels, const SplitSpec& spec);
SplitResult stratified_split(std::span<const ConversationSample> samples, const SplitSpec& spec);

std::vector<ConversationSample> select(std::span<const ConversationSample> samples,
                                       std::span<const std::size_t> indices);

}  // namespace edgeha

#endif  // EDGEHA_SPLIT_HPP_
