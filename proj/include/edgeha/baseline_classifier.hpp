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

// TF-IDF features over the user prompt feeding one-vs-rest linear SVMs
// trained by hinge-loss SGD. Labels are joint `<device>|<service>` strings.

#ifndef EDGEHA_BASELINE_CLASSIFIER_HPP_
#define EDGEHA_BASELINE_CLASSIFIER_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edgeha/core_model.hpp"
#include "edgeha/parallel.hpp"

namespace edgeha {

// Lowercases ASCII and splits on runs of non-alphanumeric bytes. Bytes
// >= 0x80 count as word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

enum class BaselineErrorKind { kEmptyCorpus, kDegenerateLabels, kBadModelFile };

class BaselineError : public std::runtime_error {
 public:
  BaselineError(BaselineErrorKind kind, const std::string& message);
  BaselineErrorKind kind() const { return kind_; }

 private:
  BaselineErrorKind kind_;
};

struct SparseVector {
  std::vector<std::uint32_t> index;  // ascending
  std::vector<double> value;

  double dot(std::span<const double> dense) const;
  double norm() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

class TfidfVectorizer {
 public:
  // Unigrams, min df 1, vocabulary in lexicographic order,
  // idf(t) = ln((1 + N) / (1 + df(t))) + 1.
  static TfidfVectorizer fit(std::span<const std::string> corpus);

  // Raw term counts times idf, L2-normalized. Unknown tokens are dropped.
  SparseVector transform(std::string_view text) const;
  std::vector<SparseVector> transform_all(std::span<const std::string> texts,
                                          Exec exec = Exec::kParallel) const;

  std::size_t size() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  // Column of `token`, or -1.
  long column(std::string_view token) const;
  double idf(std::string_view token) const;
  std::size_t document_count() const { return document_count_; }

  static TfidfVectorizer from_parts(std::vector<std::string> vocabulary, std::vector<double> idf,
                                    std::size_t document_count);

  friend bool operator==(const TfidfVectorizer& a, const TfidfVectorizer& b) {
    return a.vocabulary_ == b.vocabulary_ && a.idf_ == b.idf_;
  }

 private:
  std::vector<std::string> vocabulary_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> columns_;
  std::size_t document_count_ = 0;
};

struct TrainOptions {
  int epochs = 10;
  double learning_rate = 0.1;
  double lambda = 1e-4;
  std::uint64_t seed = 0;
};

struct LabeledPrompt {
  std::string prompt;
  std::string device;
  std::string service;
};

std::string joint_label(std::string_view device, std::string_view service);

class LinearOvrModel {
 public:
  LinearOvrModel() = default;
  LinearOvrModel(std::vector<std::string> labels, std::size_t dimension);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t dimension() const { return dimension_; }
  std::span<const double> weights(std::size_t label) const;
  std::span<double> weights(std::size_t label);
  double bias(std::size_t label) const { return bias_[label]; }
  double& bias(std::size_t label) { return bias_[label]; }

  std::vector<double> scores(const SparseVector& x) const;
  // Argmax; ties go to the lexicographically smaller label.
  std::size_t predict(const SparseVector& x) const;

  friend bool operator==(const LinearOvrModel&, const LinearOvrModel&) = default;

 private:
  std::vector<std::string> labels_;  // sorted
  std::size_t dimension_ = 0;
  std::vector<double> weights_;      // labels x dimension, row-major
  std::vector<double> bias_;
};

// One binary hinge-loss SVM per label over a shared, seeded visiting order.
// Labels train independently, so the parallel path is bitwise identical to
// the serial one. Throws kDegenerateLabels with fewer than two labels.
LinearOvrModel train(std::span<const SparseVector> features,
                     std::span<const std::string> labels, std::size_t dimension,
                     const TrainOptions& options, Exec exec = Exec::kParallel);

struct BaselineModel {
  TfidfVectorizer vectorizer;
  LinearOvrModel classifier;
  TrainOptions options;
  std::size_t training_samples = 0;

  void save(const std::string& path) const;
  static BaselineModel load(const std::string& path);
  std::string to_json() const;
  static BaselineModel from_json(std::string_view text);
};

BaselineModel train_baseline(std::span<const LabeledPrompt> samples, const TrainOptions& options,
                             Exec exec = Exec::kParallel);

struct BaselinePrediction {
  std::string device;
  std::string service;
  std::string response_text;

  RawAction raw_action() const { return {service, device, {}}; }
  // Templated response plus a ```homeassistant block with "service" and
  // "device" keys, ready for the shared exact-match parser.
  std::string assistant_text() const;
};

// `registry` supplies the friendly name for the response template; without
// a match the entity id is used.
BaselinePrediction predict(std::string_view prompt, const BaselineModel& model,
                           const DeviceRegistry* registry = nullptr);

}  // namespace edgeha

#endif  // EDGEHA_BASELINE_CLASSIFIER_HPP_
