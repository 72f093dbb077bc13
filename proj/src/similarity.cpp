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


#include "edgeha/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "edgeha/baseline_classifier.hpp"
#include "edgeha/random.hpp"

namespace edgeha {

namespace {

void normalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  const double norm = std::sqrt(sum);
  for (double& x : v) x /= norm;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return std::clamp(sum, -1.0, 1.0);
}

// Mean over rows of the row maximum.
double greedy(const std::vector<std::vector<double>>& sim, bool by_row) {
  const std::size_t rows = sim.size();
  const std::size_t cols = sim.front().size();
  const std::size_t outer = by_row ? rows : cols;
  const std::size_t inner = by_row ? cols : rows;
  double total = 0.0;
  for (std::size_t i = 0; i < outer; ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < inner; ++j) best = std::max(best, by_row ? sim[i][j] : sim[j][i]);
    total += best;
  }
  return total / static_cast<double>(outer);
}

}  // namespace

SimilarityError::SimilarityError(SimilarityErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) {
    throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile, "dimension must be positive");
  }
}

EmbeddingTable EmbeddingTable::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<EmbeddingTable> table;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> v;
    std::string field;
    while (fields >> field) {
      char* end = nullptr;
      const double x = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0' || !std::isfinite(x)) {
        throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile,
                              "line " + std::to_string(line_no) + ": bad number '" + field + "'");
      }
      v.push_back(x);
    }
    if (v.empty()) {
      throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile,
                            "line " + std::to_string(line_no) + ": no vector");
    }
    if (!table) table.emplace(v.size());
    table->add(std::move(token), std::move(v));
  }
  if (!table) throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile, "empty table");
  return std::move(*table);
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile, "cannot open '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void EmbeddingTable::add(std::string token, std::vector<double> vector) {
  if (vector.size() != dimension_) {
    throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile,
                          "vector for '" + token + "' has dimension " +
                              std::to_string(vector.size()) + ", table has " +
                              std::to_string(dimension_));
  }
  if (std::all_of(vector.begin(), vector.end(), [](double x) { return x == 0.0; })) {
    throw SimilarityError(SimilarityErrorKind::kBadEmbeddingFile,
                          "zero vector for '" + token + "'");
  }
  normalize(vector);
  vectors_.insert_or_assign(std::move(token), std::move(vector));
}

bool EmbeddingTable::contains(std::string_view token) const {
  return vectors_.count(std::string(token)) != 0;
}

std::vector<double> EmbeddingTable::lookup(std::string_view token) const {
  if (auto it = vectors_.find(std::string(token)); it != vectors_.end()) return it->second;
  SplitMix64 rng(fnv1a(token));
  std::vector<double> v(dimension_);
  do {
    for (double& x : v) x = rng.normal();
  } while (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));
  normalize(v);
  return v;
}

SimilarityScore score_similarity(std::string_view candidate, std::string_view reference,
                                 const EmbeddingTable& table) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  if (cand.empty() || ref.empty()) {
    throw SimilarityError(SimilarityErrorKind::kEmptyText,
                          cand.empty() ? "candidate has no tokens" : "reference has no tokens");
  }
  std::vector<std::vector<double>> cv, rv;
  for (const auto& t : cand) cv.push_back(table.lookup(t));
  for (const auto& t : ref) rv.push_back(table.lookup(t));
  std::vector<std::vector<double>> sim(cv.size(), std::vector<double>(rv.size()));
  for (std::size_t i = 0; i < cv.size(); ++i) {
    for (std::size_t j = 0; j < rv.size(); ++j) sim[i][j] = cosine(cv[i], rv[j]);
  }
  SimilarityScore s;
  s.precision = greedy(sim, true);
  s.recall = greedy(sim, false);
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? std::clamp(2.0 * s.precision * s.recall / denom, -1.0, 1.0) : 0.0;
  return s;
}

std::vector<std::optional<SimilarityScore>> score_all(
    std::span<const std::pair<std::string, std::string>> pairs, const EmbeddingTable& table,
    Exec exec) {
  std::vector<std::optional<SimilarityScore>> out(pairs.size());
  const auto one = [&](std::size_t i) {
    try {
      out[i] = score_similarity(pairs[i].first, pairs[i].second, table);
    } catch (const SimilarityError&) {
      out[i] = std::nullopt;
    }
  };
  const auto n = static_cast<std::int64_t>(pairs.size());
  if (exec == Exec::kParallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace edgeha
