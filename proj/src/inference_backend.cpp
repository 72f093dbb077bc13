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

#include "edgeha/inference_backend.hpp"

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "edgeha/parallel.hpp"

namespace edgeha {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void sleep_seconds(double s) {
  if (s > 0) std::this_thread::sleep_for(std::chrono::duration<double>(s));
}

std::string user_text(const PromptDocument& prompt) {
  const Turn* user = prompt.find(Role::kUser);
  return user ? user->value : std::string();
}

std::string system_text(const PromptDocument& prompt) {
  const Turn* system = prompt.find(Role::kSystem);
  return system ? system->value : std::string();
}

class StubBackend : public Backend {
 public:
  explicit StubBackend(const BackendConfig& config) : config_(config) {
    sleep_seconds(config_.stub_load_seconds);
  }

  std::string id() const override { return "stub"; }

  std::string complete(const GenerationRequest& request) override {
    sleep_seconds(config_.stub_query_seconds);
    if (config_.stub_cpu_work > 0) {
      checksum_ ^= burn_cpu(config_.stub_cpu_work, config_.worker_threads);
    }
    return config_.stub_reply.empty() ? user_text(request.prompt) : config_.stub_reply;
  }

 private:
  BackendConfig config_;
  std::uint64_t checksum_ = 0;
};

class ExternalBackend : public Backend {
 public:
  explicit ExternalBackend(const BackendConfig& config)
      : config_(config), client_(config.endpoint) {
    const auto whole = [](double s) { return static_cast<time_t>(s); };
    const auto micros = [](double s) {
      return static_cast<time_t>((s - static_cast<double>(static_cast<time_t>(s))) * 1e6);
    };
    client_.set_connection_timeout(whole(config.load_timeout_seconds),
                                   micros(config.load_timeout_seconds));
    client_.set_read_timeout(whole(config.request_timeout_seconds),
                             micros(config.request_timeout_seconds));
    client_.set_write_timeout(whole(config.request_timeout_seconds),
                              micros(config.request_timeout_seconds));
  }

  // Polls the health path until the runtime reports ready.
  void wait_until_ready() {
    const auto start = Clock::now();
    std::string last_error = "no response";
    while (seconds_since(start) < config_.load_timeout_seconds) {
      if (auto res = client_.Get(config_.health_path)) {
        if (res->status == 200) return;
        last_error = "HTTP " + std::to_string(res->status);
      } else {
        last_error = httplib::to_string(res.error());
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    throw BackendError(BackendErrorKind::kBackendUnavailable,
                       config_.endpoint + " not ready within " +
                           std::to_string(config_.load_timeout_seconds) + " s (" + last_error +
                           ")");
  }

  std::string id() const override { return "external:" + config_.endpoint; }

  std::string complete(const GenerationRequest& request) override {
    json body = {{"prompt", flatten_chat(request.prompt)},
                 {"max_new_tokens", request.max_new_tokens},
                 {"temperature", request.temperature}};
    if (request.seed) body["seed"] = *request.seed;
    const auto start = Clock::now();
    auto res = client_.Post(config_.completion_path,
                            body.dump(-1, ' ', false, json::error_handler_t::replace),
                            "application/json");
    if (!res) {
      if (res.error() == httplib::Error::Read &&
          seconds_since(start) >= config_.request_timeout_seconds * 0.95) {
        throw BackendError(BackendErrorKind::kTimeout,
                           "no reply within " + std::to_string(config_.request_timeout_seconds) +
                               " s");
      }
      throw BackendError(BackendErrorKind::kBackendUnavailable,
                         config_.endpoint + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw BackendError(BackendErrorKind::kBackendUnavailable,
                         "runtime answered HTTP " + std::to_string(res->status));
    }
    try {
      const json reply = json::parse(res->body);
      return reply.at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw BackendError(BackendErrorKind::kBackendUnavailable,
                         std::string("bad runtime reply: ") + e.what());
    }
  }

 private:
  BackendConfig config_;
  httplib::Client client_;
};

std::uintmax_t path_size(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(path)) return fs::file_size(path);
  std::uintmax_t total = 0;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file()) total += entry.file_size();
  }
  return total;
}

std::unique_ptr<ScriptedBackend> read_script(const BackendConfig& config) {
  auto script = std::make_unique<ScriptedBackend>(config.scripted_default);
  if (config.script_path.empty()) return script;
  std::ifstream in(config.script_path);
  if (!in) {
    throw BackendError(BackendErrorKind::kModelNotFound,
                       "script '" + config.script_path + "' not found");
  }
  try {
    const json entries = json::parse(in);
    for (const auto& e : entries) {
      if (e.contains("system")) {
        script->add(e.at("system").get<std::string>(), e.at("user").get<std::string>(),
                    e.at("text").get<std::string>());
      } else {
        script->add(e.at("user").get<std::string>(), e.at("text").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw BackendError(BackendErrorKind::kInvalidConfig,
                       "script '" + config.script_path + "': " + e.what());
  }
  return script;
}

}  // namespace

std::string_view to_string(Quantization q) {
  switch (q) {
    case Quantization::k16Bit: return "16-bit";
    case Quantization::k8Bit: return "8-bit";
    case Quantization::k4Bit: return "4-bit";
  }
  return "16-bit";
}

Quantization parse_quantization(std::string_view text) {
  if (text == "16-bit" || text == "16" || text == "bf16") return Quantization::k16Bit;
  if (text == "8-bit" || text == "8" || text == "nf8") return Quantization::k8Bit;
  if (text == "4-bit" || text == "4" || text == "nf4") return Quantization::k4Bit;
  throw BackendError(BackendErrorKind::kInvalidConfig,
                     "unknown quantization '" + std::string(text) + "'");
}

std::string ModelDescriptor::label() const {
  return name + " (" + std::string(to_string(quantization)) + ")";
}

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kScripted: return "scripted";
    case BackendKind::kStub: return "stub";
    case BackendKind::kExternal: return "external";
  }
  return "scripted";
}

BackendConfig BackendConfig::from_json(const json& j) {
  BackendConfig c;
  try {
    const std::string kind = j.value("kind", std::string("scripted"));
    if (kind == "scripted") {
      c.kind = BackendKind::kScripted;
    } else if (kind == "stub") {
      c.kind = BackendKind::kStub;
    } else if (kind == "external") {
      c.kind = BackendKind::kExternal;
    } else {
      throw BackendError(BackendErrorKind::kInvalidConfig, "unknown backend kind '" + kind + "'");
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      c.model.name = m.value("name", c.model.name);
      c.model.parameter_scale = m.value("parameter_scale", c.model.parameter_scale);
      c.model.quantization =
          parse_quantization(m.value("quantization", std::string(to_string(c.model.quantization))));
    }
    c.worker_threads = j.value("worker_threads", c.worker_threads);
    c.load_timeout_seconds = j.value("load_timeout_seconds", c.load_timeout_seconds);
    c.request_timeout_seconds = j.value("request_timeout_seconds", c.request_timeout_seconds);
    c.max_sequence_tokens = j.value("max_sequence_tokens", c.max_sequence_tokens);
    c.memory_budget_bytes = j.value("memory_budget_bytes", c.memory_budget_bytes);
    c.endpoint = j.value("endpoint", c.endpoint);
    c.completion_path = j.value("completion_path", c.completion_path);
    c.health_path = j.value("health_path", c.health_path);
    c.model_path = j.value("model_path", c.model_path);
    c.script_path = j.value("script_path", c.script_path);
    c.scripted_default = j.value("scripted_default", c.scripted_default);
    c.stub_load_seconds = j.value("stub_load_seconds", c.stub_load_seconds);
    c.stub_query_seconds = j.value("stub_query_seconds", c.stub_query_seconds);
    c.stub_cpu_work = j.value("stub_cpu_work", c.stub_cpu_work);
    c.stub_reply = j.value("stub_reply", c.stub_reply);
  } catch (const json::exception& e) {
    throw BackendError(BackendErrorKind::kInvalidConfig, e.what());
  }
  if (c.worker_threads < 1) {
    throw BackendError(BackendErrorKind::kInvalidConfig, "worker_threads must be >= 1");
  }
  return c;
}

BackendConfig BackendConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BackendError(BackendErrorKind::kInvalidConfig, "cannot read '" + path + "'");
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw BackendError(BackendErrorKind::kInvalidConfig, path + ": " + e.what());
  }
}

json BackendConfig::to_json() const {
  json j = {{"kind", to_string(kind)},
            {"model",
             {{"name", model.name},
              {"parameter_scale", model.parameter_scale},
              {"quantization", to_string(model.quantization)}}},
            {"worker_threads", worker_threads},
            {"load_timeout_seconds", load_timeout_seconds},
            {"request_timeout_seconds", request_timeout_seconds},
            {"max_sequence_tokens", max_sequence_tokens},
            {"memory_budget_bytes", memory_budget_bytes}};
  if (kind == BackendKind::kExternal) {
    j["endpoint"] = endpoint;
    j["completion_path"] = completion_path;
    j["health_path"] = health_path;
    if (!model_path.empty()) j["model_path"] = model_path;
  }
  if (kind == BackendKind::kScripted && !script_path.empty()) j["script_path"] = script_path;
  if (kind == BackendKind::kStub) {
    j["stub_load_seconds"] = stub_load_seconds;
    j["stub_query_seconds"] = stub_query_seconds;
    j["stub_cpu_work"] = stub_cpu_work;
  }
  return j;
}

std::string_view to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case BackendErrorKind::kTimeout: return "Timeout";
    case BackendErrorKind::kContextOverflow: return "ContextOverflow";
    case BackendErrorKind::kModelNotFound: return "ModelNotFound";
    case BackendErrorKind::kOutOfMemoryBudget: return "OutOfMemoryBudget";
    case BackendErrorKind::kInvalidConfig: return "InvalidConfig";
  }
  return "BackendError";
}

BackendError::BackendError(BackendErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::size_t approximate_token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      if (!in_word) ++count;
      in_word = true;
    } else {
      in_word = false;
      if (!std::isspace(u)) ++count;
    }
  }
  return count;
}

std::string flatten_chat(const PromptDocument& prompt) {
  std::string out;
  for (const auto& turn : prompt.turns) {
    out += "<|im_start|>";
    out += to_string(turn.role);
    out += '\n';
    out += turn.value;
    out += "<|im_end|>\n";
  }
  out += "<|im_start|>assistant\n";
  return out;
}

ScriptedBackend::ScriptedBackend(std::string default_reply)
    : default_reply_(std::move(default_reply)) {}

void ScriptedBackend::add(std::string user, std::string reply) {
  by_user_.insert_or_assign(std::move(user), std::move(reply));
}

void ScriptedBackend::add(std::string system, std::string user, std::string reply) {
  exact_.insert_or_assign({std::move(system), std::move(user)}, std::move(reply));
}

std::string ScriptedBackend::complete(const GenerationRequest& request) {
  std::string user = user_text(request.prompt);
  if (auto it = exact_.find({system_text(request.prompt), user}); it != exact_.end()) {
    return it->second;
  }
  if (auto it = by_user_.find(user); it != by_user_.end()) return it->second;
  if (default_reply_ == "{echo}") return user;
  return default_reply_;
}

BackendHandle::BackendHandle(std::unique_ptr<Backend> backend, BackendConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {}

std::string BackendHandle::id() const { return backend_->id(); }

void BackendHandle::FifoGate::acquire() {
  std::unique_lock lock(mu_);
  const std::uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] { return serving_ == ticket; });
}

void BackendHandle::FifoGate::release() {
  {
    std::lock_guard lock(mu_);
    ++serving_;
  }
  cv_.notify_all();
}

GenerationResult BackendHandle::generate(const GenerationRequest& request) {
  const std::size_t tokens = approximate_token_count(flatten_chat(request.prompt));
  if (tokens > config_.max_sequence_tokens) {
    throw BackendError(BackendErrorKind::kContextOverflow,
                       "prompt has ~" + std::to_string(tokens) + " tokens, limit is " +
                           std::to_string(config_.max_sequence_tokens));
  }
  if (request.max_new_tokens < 1) {
    throw BackendError(BackendErrorKind::kInvalidConfig, "max_new_tokens must be positive");
  }

  gate_.acquire();
  struct Release {
    FifoGate& gate;
    ~Release() { gate.release(); }
  } release{gate_};

  GenerationResult result;
  const auto start = Clock::now();
  result.text = backend_->complete(request);
  result.latency_seconds = seconds_since(start);
  result.backend_id = backend_->id();
  result.model = config_.model;
  return result;
}

GenerationResult generate(const GenerationRequest& request, BackendHandle& handle) {
  return handle.generate(request);
}

LoadedBackend load_scripted_backend(const BackendConfig& config,
                                    std::unique_ptr<ScriptedBackend> script) {
  const auto start = Clock::now();
  LoadedBackend out;
  out.handle = std::make_shared<BackendHandle>(std::move(script), config);
  out.load_time_seconds = seconds_since(start);
  return out;
}

LoadedBackend load_backend(const BackendConfig& config) {
  if (config.worker_threads < 1) {
    throw BackendError(BackendErrorKind::kInvalidConfig, "worker_threads must be >= 1");
  }
  const auto start = Clock::now();
  std::unique_ptr<Backend> backend;
  switch (config.kind) {
    case BackendKind::kScripted:
      backend = read_script(config);
      break;
    case BackendKind::kStub:
      backend = std::make_unique<StubBackend>(config);
      break;
    case BackendKind::kExternal: {
      if (config.endpoint.empty()) {
        throw BackendError(BackendErrorKind::kInvalidConfig, "external backend needs an endpoint");
      }
      if (!config.model_path.empty()) {
        std::error_code ec;
        if (!std::filesystem::exists(config.model_path, ec)) {
          throw BackendError(BackendErrorKind::kModelNotFound,
                             "model artifact '" + config.model_path + "' not found");
        }
        const auto bytes = path_size(config.model_path);
        if (bytes > config.memory_budget_bytes) {
          throw BackendError(BackendErrorKind::kOutOfMemoryBudget,
                             "model artifact is " + std::to_string(bytes) +
                                 " bytes, budget is " + std::to_string(config.memory_budget_bytes));
        }
      }
      auto external = std::make_unique<ExternalBackend>(config);
      external->wait_until_ready();
      backend = std::move(external);
      break;
    }
  }
  LoadedBackend out;
  out.handle = std::make_shared<BackendHandle>(std::move(backend), config);
  out.load_time_seconds = seconds_since(start);
  return out;
}

}  // namespace edgeha
