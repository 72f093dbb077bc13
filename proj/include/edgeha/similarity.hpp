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


// Greedy-matching token-embedding similarity between a candidate and a
// reference text: precision, recall and their F1.

#ifndef EDGEHA_SIMILARITY_HPP_
#define EDGEHA_SIMILARITY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edgeha/parallel.hpp"

namespace edgeha {

enum class SimilarityErrorKind { kEmptyText, kBadEmbeddingFile };

class SimilarityError : public std::runtime_error {
 public:
  SimilarityError(SimilarityErrorKind kind, const std::string& message);
  SimilarityErrorKind kind() const { return kind_; }

 private:
  SimilarityErrorKind kind_;
};

// Token to unit vector. Tokens missing from the table get a pseudo-random
// unit vector seeded by their bytes, identical on every platform.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 50);

  // Whitespace-separated `token v1 ... vd` lines. Vectors are normalized.
  static EmbeddingTable parse(std::string_view text);
  static EmbeddingTable load(const std::string& path);

  // Throws kBadEmbeddingFile on dimension mismatch or a zero vector.
  void add(std::string token, std::vector<double> vector);
  std::vector<double> lookup(std::string_view token) const;
  bool contains(std::string_view token) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct SimilarityScore {
  double precision = 0.0;
  double recall = 0.0;
  // 2PR / (P + R) clamped to [-1, 1]; 0 when P + R <= 0.
  double f1 = 0.0;

  friend bool operator==(const SimilarityScore&, const SimilarityScore&) = default;
};

// Tokenized like the baseline classifier. Throws kEmptyText when either
// side has no tokens.
SimilarityScore score_similarity(std::string_view candidate, std::string_view reference,
                                 const EmbeddingTable& table);

inline double score_semantic_similarity(std::string_view candidate, std::string_view reference,
                                        const EmbeddingTable& table) {
  return score_similarity(candidate, reference, table).f1;
}

// Scores every (candidate, reference) pair; empty sides give nullopt.
std::vector<std::optional<SimilarityScore>> score_all(
    std::span<const std::pair<std::string, std::string>> pairs, const EmbeddingTable& table,
    Exec exec = Exec::kParallel);

}  // namespace edgeha

#endif  // EDGEHA_SIMILARITY_HPP_
