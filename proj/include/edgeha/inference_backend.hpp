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

// Generation contract over interchangeable backends.
//
//   scripted  deterministic lookup table, for tests and gold replay
//   stub      programmable delays and CPU work, for latency measurements
//   external  HTTP bridge to a local runtime serving a pre-quantized model
//
// A BackendHandle admits one request at a time; waiting callers are served
// in arrival order.

#ifndef EDGEHA_INFERENCE_BACKEND_HPP_
#define EDGEHA_INFERENCE_BACKEND_HPP_

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "edgeha/prompt_codec.hpp"

namespace edgeha {

enum class Quantization { k16Bit, k8Bit, k4Bit };

std::string_view to_string(Quantization q);
Quantization parse_quantization(std::string_view text);

struct ModelDescriptor {
  std::string name = "scripted";
  std::string parameter_scale = "0.5B";  // "0.5B" or "1.5B"
  Quantization quantization = Quantization::k16Bit;

  // e.g. "Qwen2.5-0.5B (8-bit)"
  std::string label() const;

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

enum class BackendKind { kScripted, kStub, kExternal };

std::string_view to_string(BackendKind kind);

struct BackendConfig {
  BackendKind kind = BackendKind::kScripted;
  ModelDescriptor model;
  int worker_threads = 1;
  double load_timeout_seconds = 30.0;
  double request_timeout_seconds = 120.0;
  std::size_t max_sequence_tokens = 2048;
  std::uint64_t memory_budget_bytes = 8ull << 30;

  // external
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  std::string completion_path = "/completion";
  std::string health_path = "/health";
  std::string model_path;  // optional; checked against the memory budget

  // scripted: JSON file of [{"system"?: ..., "user": ..., "text": ...}]
  std::string script_path;
  // Reply for prompts the script does not cover. "{echo}" repeats the user turn.
  std::string scripted_default = "Sorry, I don't know how to help with that.";

  // stub
  double stub_load_seconds = 0.0;
  double stub_query_seconds = 0.0;
  // Total busy-loop iterations per query, split across worker_threads.
  std::uint64_t stub_cpu_work = 0;
  std::string stub_reply;

  static BackendConfig from_json(const nlohmann::json& j);
  static BackendConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

struct GenerationRequest {
  PromptDocument prompt;
  int max_new_tokens = 256;
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
};

struct GenerationResult {
  std::string text;
  double latency_seconds = 0.0;
  std::string backend_id;
  ModelDescriptor model;
};

enum class BackendErrorKind {
  kBackendUnavailable,
  kTimeout,
  kContextOverflow,
  kModelNotFound,
  kOutOfMemoryBudget,
  kInvalidConfig,
};

std::string_view to_string(BackendErrorKind kind);

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrorKind kind, const std::string& message);
  BackendErrorKind kind() const { return kind_; }

 private:
  BackendErrorKind kind_;
};

// Rough token count: alphanumeric runs and single punctuation characters.
std::size_t approximate_token_count(std::string_view text);

// ChatML rendering sent to external runtimes.
std::string flatten_chat(const PromptDocument& prompt);

// One concrete generator. Implementations need not be thread-safe; the
// handle serializes calls.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const GenerationRequest& request) = 0;
};

// Replies keyed on (system, user) with a user-only fallback.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::string default_reply = "");

  void add(std::string user, std::string reply);
  void add(std::string system, std::string user, std::string reply);
  std::size_t size() const { return exact_.size() + by_user_.size(); }

  std::string id() const override { return "scripted"; }
  std::string complete(const GenerationRequest& request) override;

 private:
  std::string default_reply_;
  std::map<std::pair<std::string, std::string>, std::string> exact_;
  std::map<std::string, std::string> by_user_;
};

class BackendHandle {
 public:
  BackendHandle(std::unique_ptr<Backend> backend, BackendConfig config);

  // Throws BackendError. Latency covers the backend call only, not the time
  // spent waiting for the handle.
  GenerationResult generate(const GenerationRequest& request);

  const BackendConfig& config() const { return config_; }
  std::string id() const;

 private:
  class FifoGate {
   public:
    void acquire();
    void release();

   private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::uint64_t next_ticket_ = 0;
    std::uint64_t serving_ = 0;
  };

  std::unique_ptr<Backend> backend_;
  BackendConfig config_;
  FifoGate gate_;
};

struct LoadedBackend {
  std::shared_ptr<BackendHandle> handle;
  double load_time_seconds = 0.0;
};

// Builds and initializes the configured backend, timing initialization.
// Throws BackendError (kModelNotFound, kOutOfMemoryBudget,
// kBackendUnavailable, kInvalidConfig).
LoadedBackend load_backend(const BackendConfig& config);

// Same, with a script supplied in memory.
LoadedBackend load_scripted_backend(const BackendConfig& config,
                                    std::unique_ptr<ScriptedBackend> script);

GenerationResult generate(const GenerationRequest& request, BackendHandle& handle);

}  // namespace edgeha

#endif  // EDGEHA_INFERENCE_BACKEND_HPP_
