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


// Exact-match slot/intent evaluation, semantic similarity aggregation, CPU
// latency benchmarking and report rendering.

#ifndef EDGEHA_EVALUATION_HPP_
#define EDGEHA_EVALUATION_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeha/action_parser.hpp"
#include "edgeha/baseline_classifier.hpp"
#include "edgeha/dataset.hpp"
#include "edgeha/inference_backend.hpp"
#include "edgeha/parallel.hpp"
#include "edgeha/similarity.hpp"

namespace edgeha {

enum class ErrorClass {
  kCorrect,
  kNoActionBlock,
  kMalformedJson,
  kMissingField,
  kUnknownService,
  kUnknownDevice,
  kDomainMismatch,
  kWrongService,
  kWrongDevice,
  kBackendFailure,
};

// Every class except kCorrect, in report order.
inline constexpr std::array<ErrorClass, 9> kErrorClasses = {
    ErrorClass::kNoActionBlock,  ErrorClass::kMalformedJson, ErrorClass::kMissingField,
    ErrorClass::kUnknownService, ErrorClass::kUnknownDevice, ErrorClass::kDomainMismatch,
    ErrorClass::kWrongService,   ErrorClass::kWrongDevice,   ErrorClass::kBackendFailure,
};

std::string_view to_string(ErrorClass c);

// The shared exact-match rule: parse outcome first, then string equality of
// the canonical service and device against gold. A wrong service outranks
// a wrong device. Parameters are not part of the match, so a call whose
// service and device validated but whose parameters did not is still
// compared on service and device.
ErrorClass classify(const AssistantOutput& output, const RawAction& gold);

struct DecodingSettings {
  int max_new_tokens = 256;
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
};

class SystemUnderTest {
 public:
  virtual ~SystemUnderTest() = default;
  virtual std::string name() const = 0;
  // Raw assistant text for one sample. May throw BackendError.
  virtual std::string respond(const ConversationSample& sample) = 0;
  // Whether respond may run from several threads at once.
  virtual bool concurrent() const = 0;
  // Whether the response text is model output worth scoring for similarity.
  virtual bool scores_similarity() const { return true; }
  virtual std::optional<ModelDescriptor> model() const { return std::nullopt; }
  virtual std::string backend() const = 0;
  virtual DecodingSettings decoding() const { return {}; }
};

// Generation through an inference backend. Only scripted backends fan out.
class BackendSystem : public SystemUnderTest {
 public:
  explicit BackendSystem(std::shared_ptr<BackendHandle> handle, DecodingSettings decoding = {});

  std::string name() const override;
  std::string respond(const ConversationSample& sample) override;
  bool concurrent() const override;
  std::optional<ModelDescriptor> model() const override;
  std::string backend() const override;
  DecodingSettings decoding() const override { return decoding_; }

 private:
  std::shared_ptr<BackendHandle> handle_;
  DecodingSettings decoding_;
};

class BaselineSystem : public SystemUnderTest {
 public:
  explicit BaselineSystem(std::shared_ptr<const BaselineModel> model);

  std::string name() const override { return "SVC (Baseline)"; }
  std::string respond(const ConversationSample& sample) override;
  bool concurrent() const override { return true; }
  bool scores_similarity() const override { return false; }
  std::string backend() const override { return "baseline"; }

 private:
  std::shared_ptr<const BaselineModel> model_;
};

// A scripted backend answering each sample with its recorded assistant turn.
std::unique_ptr<ScriptedBackend> replay_script(std::span<const ConversationSample> samples);

struct SampleOutcome {
  ErrorClass error = ErrorClass::kCorrect;
  std::string response_text;
  std::optional<SimilarityScore> similarity;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  // Sample standard deviation; 0 for fewer than two values.
  double std = 0.0;
};

Summary summarize(std::span<const double> values);

struct EvaluationResult {
  std::vector<SampleOutcome> samples;
  std::map<ErrorClass, std::size_t> counts;  // zero-filled for every class
  std::size_t correct = 0;
  std::size_t total = 0;
  std::optional<Summary> similarity;
  std::size_t similarity_skipped = 0;

  double accuracy() const;
};

// Fans out over samples only for concurrent systems under kParallel.
// `embeddings` enables similarity scoring of the response text against the
// gold response. Throws std::invalid_argument on an empty split.
EvaluationResult evaluate_slot_intent(SystemUnderTest& system,
                                      std::span<const ConversationSample> split,
                                      const EmbeddingTable* embeddings = nullptr,
                                      Exec exec = Exec::kParallel);

struct LatencyStats {
  std::size_t sample_count = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;
  int worker_threads = 1;
  double load_time_seconds = 0.0;
  std::size_t warmup = 0;
};

inline constexpr std::size_t kWarmupQueries = 3;

// Loads the backend with `worker_threads`, runs kWarmupQueries unmeasured
// queries and then times `sample_count` sequential queries. A scripted
// backend can take its script from `script`. Throws std::invalid_argument
// when sample_count is 0 or exceeds the split, BackendError otherwise.
LatencyStats benchmark_latency(const BackendConfig& config,
                               std::span<const ConversationSample> split,
                               std::size_t sample_count, int worker_threads,
                               std::unique_ptr<ScriptedBackend> script = nullptr);

struct MetricsReport {
  static constexpr int kSchemaVersion = 1;

  std::string system_name;
  std::string backend;
  std::optional<ModelDescriptor> model;
  DecodingSettings decoding;
  std::string dataset;
  std::string split_fingerprint;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::map<std::string, std::size_t> error_counts;
  std::optional<Summary> similarity;
  std::size_t similarity_skipped = 0;
  std::optional<LatencyStats> latency;

  double accuracy() const;
  std::string to_json() const;
  static MetricsReport from_json(std::string_view text);
};

MetricsReport make_report(const SystemUnderTest& system, const EvaluationResult& result,
                          std::string dataset, std::string split_fingerprint);

// `| Model | Accuracy | BERTScore |` rows, plus a latency table when any
// report carries latency.
std::string render_markdown(std::span<const MetricsReport> reports);

enum class ReportFormat { kJson, kMarkdown };

// Throws DatasetError(kUnwritableFile).
void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path);

// Error classes whose rate in `current` exceeds the rate in `baseline`.
std::vector<std::string> regressions(const MetricsReport& current, const MetricsReport& baseline);

}  // namespace edgeha

#endif  // EDGEHA_EVALUATION_HPP_
