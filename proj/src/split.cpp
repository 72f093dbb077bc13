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


#include "edgeha/split.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "edgeha/random.hpp"

namespace edgeha {

namespace {

std::map<std::string, std::size_t, std::less<>> apportion(
    const std::map<std::string, std::vector<std::size_t>, std::less<>>& members, std::size_t n,
    const SplitSpec& spec) {
  if (!(spec.test_fraction >= 0.0 && spec.test_fraction <= 1.0)) {
    throw SplitError(SplitErrorKind::kInvalidSpec, "test fraction must lie in [0, 1]");
  }
  const auto total =
      static_cast<std::size_t>(std::floor(spec.test_fraction * static_cast<double>(n) + 0.5));
  std::map<std::string, std::size_t, std::less<>> counts;
  std::vector<std::pair<double, std::string>> remainders;
  std::size_t assigned = 0;
  for (const auto& [label, idx] : members) {
    const double quota = spec.test_fraction * static_cast<double>(idx.size());
    const auto base = static_cast<std::size_t>(std::floor(quota));
    counts[label] = base;
    assigned += base;
    remainders.emplace_back(quota - static_cast<double>(base), label);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total && k < remainders.size(); ++k, ++assigned) {
    ++counts[remainders[k].second];
  }
  for (auto& [label, count] : counts) {
    count = std::max(count, std::min(spec.floor, members.at(label).size()));
  }
  return counts;
}

}  // namespace

SplitError::SplitError(SplitErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

SplitResult stratified_split(std::span<const std::string> labels, const SplitSpec& spec) {
  std::map<std::string, std::vector<std::size_t>, std::less<>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  std::map<std::string, std::size_t, std::less<>> counts;
  if (!spec.per_class_test.empty()) {
    for (const auto& [label, want] : spec.per_class_test) {
      auto it = members.find(label);
      const std::size_t have = it == members.end() ? 0 : it->second.size();
      if (want > have) {
        throw SplitError(SplitErrorKind::kInsufficientClassSize,
                         "class '" + label + "' has " + std::to_string(have) +
                             " samples, test needs " + std::to_string(want));
      }
    }
    for (const auto& [label, idx] : members) {
      auto it = spec.per_class_test.find(label);
      counts[label] = it == spec.per_class_test.end() ? 0 : it->second;
    }
  } else {
    counts = apportion(members, labels.size(), spec);
  }

  SplitResult out;
  std::vector<bool> in_test(labels.size(), false);
  for (auto& [label, idx] : members) {
    SplitMix64 rng(spec.seed ^ fnv1a(label));
    auto order = idx;
    shuffle(order, rng);
    const std::size_t k = counts[label];
    for (std::size_t j = 0; j < k; ++j) in_test[order[j]] = true;
    out.test_counts[label] = k;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) (in_test[i] ? out.test : out.train).push_back(i);

  std::string key = "seed=" + std::to_string(spec.seed) + ";";
  for (const auto& [label, k] : out.test_counts) key += label + ":" + std::to_string(k) + ";";
  for (std::size_t i : out.test) key += std::to_string(i) + ",";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  out.fingerprint = hex;
  return out;
}

SplitResult stratified_split(std::span<const ConversationSample> samples, const SplitSpec& spec) {
  std::vector<std::string> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.class_label);
  return stratified_split(std::span<const std::string>(labels), spec);
}

std::vector<ConversationSample> select(std::span<const ConversationSample> samples,
                                       std::span<const std::size_t> indices) {
  std::vector<ConversationSample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples[i]);
  return out;
}

}  // namespace edgeha
