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


#include "edgeha/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace edgeha {

namespace {

using ojson = nlohmann::ordered_json;

ErrorClass from_outcome(Outcome o) {
  switch (o) {
    case Outcome::kOk:
    case Outcome::kMissingParam:
    case Outcome::kUnexpectedParam: return ErrorClass::kCorrect;
    case Outcome::kNoActionBlock: return ErrorClass::kNoActionBlock;
    case Outcome::kMalformedJson: return ErrorClass::kMalformedJson;
    case Outcome::kMissingField: return ErrorClass::kMissingField;
    case Outcome::kUnknownService: return ErrorClass::kUnknownService;
    case Outcome::kUnknownDevice: return ErrorClass::kUnknownDevice;
    case Outcome::kDomainMismatch: return ErrorClass::kDomainMismatch;
  }
  return ErrorClass::kMalformedJson;
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

ojson summary_json(const Summary& s, std::size_t skipped) {
  return {{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"std", s.std},
          {"skipped", skipped}};
}

}  // namespace

std::string_view to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::kCorrect: return "Correct";
    case ErrorClass::kNoActionBlock: return "NoActionBlock";
    case ErrorClass::kMalformedJson: return "MalformedJson";
    case ErrorClass::kMissingField: return "MissingField";
    case ErrorClass::kUnknownService: return "UnknownService";
    case ErrorClass::kUnknownDevice: return "UnknownDevice";
    case ErrorClass::kDomainMismatch: return "DomainMismatch";
    case ErrorClass::kWrongService: return "WrongService";
    case ErrorClass::kWrongDevice: return "WrongDevice";
    case ErrorClass::kBackendFailure: return "BackendFailure";
  }
  return "Unknown";
}

ErrorClass classify(const AssistantOutput& output, const RawAction& gold) {
  const ErrorClass c = from_outcome(output.outcome);
  if (c != ErrorClass::kCorrect) return c;
  std::string service;
  std::string device;
  if (output.action) {
    service = output.action->service.canonical();
    device = output.action->target_device.str();
  } else {
    // Service, device and domain validated before the parameter check.
    service = trim(output.raw_action->service);
    device = trim(output.raw_action->device);
  }
  if (service != trim(gold.service)) return ErrorClass::kWrongService;
  if (device != trim(gold.device)) return ErrorClass::kWrongDevice;
  return ErrorClass::kCorrect;
}

BackendSystem::BackendSystem(std::shared_ptr<BackendHandle> handle, DecodingSettings decoding)
    : handle_(std::move(handle)), decoding_(decoding) {}

std::string BackendSystem::name() const {
  if (handle_->config().kind == BackendKind::kScripted) return "Replay (scripted)";
  return handle_->config().model.label();
}

std::string BackendSystem::respond(const ConversationSample& sample) {
  GenerationRequest request;
  request.prompt = sample.prompt();
  request.max_new_tokens = decoding_.max_new_tokens;
  request.temperature = decoding_.temperature;
  request.seed = decoding_.seed;
  return handle_->generate(request).text;
}

bool BackendSystem::concurrent() const {
  return handle_->config().kind == BackendKind::kScripted;
}

std::optional<ModelDescriptor> BackendSystem::model() const { return handle_->config().model; }

std::string BackendSystem::backend() const {
  return std::string(to_string(handle_->config().kind));
}

BaselineSystem::BaselineSystem(std::shared_ptr<const BaselineModel> model)
    : model_(std::move(model)) {}

std::string BaselineSystem::respond(const ConversationSample& sample) {
  return predict(sample.user_text, *model_, &sample.context.registry).assistant_text();
}

std::unique_ptr<ScriptedBackend> replay_script(std::span<const ConversationSample> samples) {
  auto script = std::make_unique<ScriptedBackend>();
  for (const auto& s : samples) script->add(s.system_text, s.user_text, s.gold_text);
  return script;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

double EvaluationResult::accuracy() const {
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

EvaluationResult evaluate_slot_intent(SystemUnderTest& system,
                                      std::span<const ConversationSample> split,
                                      const EmbeddingTable* embeddings, Exec exec) {
  if (split.empty()) throw std::invalid_argument("evaluation split is empty");
  EvaluationResult result;
  result.samples.resize(split.size());
  const auto one = [&](std::size_t i) {
    const auto& sample = split[i];
    SampleOutcome& out = result.samples[i];
    std::string text;
    try {
      text = system.respond(sample);
    } catch (const BackendError& e) {
      out.error = ErrorClass::kBackendFailure;
      out.response_text = e.what();
      return;
    }
    const auto parsed =
        parse_assistant_output(text, sample.context.catalog, sample.context.registry);
    out.error = classify(parsed, sample.gold_action);
    out.response_text = parsed.response_text;
  };
  const auto n = static_cast<std::int64_t>(split.size());
  if (exec == Exec::kParallel && system.concurrent()) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }

  result.total = split.size();
  result.counts[ErrorClass::kCorrect] = 0;
  for (ErrorClass c : kErrorClasses) result.counts[c] = 0;
  for (const auto& s : result.samples) ++result.counts[s.error];
  result.correct = result.counts[ErrorClass::kCorrect];

  if (embeddings && system.scores_similarity()) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(split.size());
    for (std::size_t i = 0; i < split.size(); ++i) {
      pairs.emplace_back(result.samples[i].response_text, split[i].gold_response);
    }
    const auto scores = score_all(pairs, *embeddings, exec);
    std::vector<double> f1;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      result.samples[i].similarity = scores[i];
      if (scores[i]) {
        f1.push_back(scores[i]->f1);
      } else {
        ++result.similarity_skipped;
      }
    }
    result.similarity = summarize(f1);
  }
  return result;
}

LatencyStats benchmark_latency(const BackendConfig& config,
                               std::span<const ConversationSample> split,
                               std::size_t sample_count, int worker_threads,
                               std::unique_ptr<ScriptedBackend> script) {
  if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
  if (sample_count > split.size()) {
    throw std::invalid_argument("sample_count " + std::to_string(sample_count) +
                                " exceeds split size " + std::to_string(split.size()));
  }
  BackendConfig cfg = config;
  cfg.worker_threads = worker_threads;
  LoadedBackend loaded = script && cfg.kind == BackendKind::kScripted
                             ? load_scripted_backend(cfg, std::move(script))
                             : load_backend(cfg);

  const auto request_for = [&](const ConversationSample& s) {
    GenerationRequest r;
    r.prompt = s.prompt();
    return r;
  };
  for (std::size_t i = 0; i < kWarmupQueries; ++i) {
    loaded.handle->generate(request_for(split[i % split.size()]));
  }
  std::vector<double> seconds;
  seconds.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const auto request = request_for(split[i]);
    const auto start = std::chrono::steady_clock::now();
    loaded.handle->generate(request);
    seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  const Summary s = summarize(seconds);
  LatencyStats out;
  out.sample_count = sample_count;
  out.mean_seconds = s.mean;
  out.std_seconds = s.std;
  out.worker_threads = worker_threads;
  out.load_time_seconds = loaded.load_time_seconds;
  out.warmup = kWarmupQueries;
  return out;
}

double MetricsReport::accuracy() const {
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

std::string MetricsReport::to_json() const {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["system"] = system_name;
  j["backend"] = backend;
  if (model) {
    j["model"] = {{"name", model->name},
                  {"parameter_scale", model->parameter_scale},
                  {"quantization", to_string(model->quantization)},
                  {"label", model->label()}};
  } else {
    j["model"] = nullptr;
  }
  j["decoding"] = {{"max_new_tokens", decoding.max_new_tokens},
                   {"temperature", decoding.temperature}};
  j["decoding"]["seed"] = decoding.seed ? ojson(*decoding.seed) : ojson(nullptr);
  j["dataset"] = dataset;
  j["split_fingerprint"] = split_fingerprint;
  j["total"] = total;
  j["correct"] = correct;
  j["exact_match_accuracy"] = accuracy();
  j["error_counts"] = ojson::object();
  for (ErrorClass c : kErrorClasses) {
    const std::string key(to_string(c));
    auto it = error_counts.find(key);
    j["error_counts"][key] = it == error_counts.end() ? 0 : it->second;
  }
  j["semantic_similarity"] =
      similarity ? summary_json(*similarity, similarity_skipped) : ojson(nullptr);
  if (latency) {
    j["latency"] = {{"sample_count", latency->sample_count},
                    {"mean_seconds", latency->mean_seconds},
                    {"std_seconds", latency->std_seconds},
                    {"worker_threads", latency->worker_threads},
                    {"load_time_seconds", latency->load_time_seconds},
                    {"warmup", latency->warmup}};
  } else {
    j["latency"] = nullptr;
  }
  return j.dump(2, ' ', false, ojson::error_handler_t::replace) + "\n";
}

MetricsReport MetricsReport::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw std::invalid_argument("unsupported report schema_version " +
                                  j.at("schema_version").dump());
    }
    MetricsReport r;
    r.system_name = j.at("system").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    if (!j.at("model").is_null()) {
      const auto& m = j["model"];
      r.model = ModelDescriptor{m.at("name").get<std::string>(),
                                m.at("parameter_scale").get<std::string>(),
                                parse_quantization(m.at("quantization").get<std::string>())};
    }
    const auto& d = j.at("decoding");
    r.decoding.max_new_tokens = d.at("max_new_tokens").get<int>();
    r.decoding.temperature = d.at("temperature").get<double>();
    if (!d.at("seed").is_null()) r.decoding.seed = d["seed"].get<std::int64_t>();
    r.dataset = j.at("dataset").get<std::string>();
    r.split_fingerprint = j.at("split_fingerprint").get<std::string>();
    r.total = j.at("total").get<std::size_t>();
    r.correct = j.at("correct").get<std::size_t>();
    for (const auto& [k, v] : j.at("error_counts").items()) r.error_counts[k] = v.get<std::size_t>();
    if (!j.at("semantic_similarity").is_null()) {
      const auto& s = j["semantic_similarity"];
      r.similarity = Summary{s.at("count").get<std::size_t>(), s.at("mean").get<double>(),
                             s.at("median").get<double>(), s.at("std").get<double>()};
      r.similarity_skipped = s.at("skipped").get<std::size_t>();
    }
    if (!j.at("latency").is_null()) {
      const auto& l = j["latency"];
      LatencyStats stats;
      stats.sample_count = l.at("sample_count").get<std::size_t>();
      stats.mean_seconds = l.at("mean_seconds").get<double>();
      stats.std_seconds = l.at("std_seconds").get<double>();
      stats.worker_threads = l.at("worker_threads").get<int>();
      stats.load_time_seconds = l.at("load_time_seconds").get<double>();
      stats.warmup = l.at("warmup").get<std::size_t>();
      r.latency = stats;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

MetricsReport make_report(const SystemUnderTest& system, const EvaluationResult& result,
                          std::string dataset, std::string split_fingerprint) {
  MetricsReport r;
  r.system_name = system.name();
  r.backend = system.backend();
  r.model = system.model();
  r.decoding = system.decoding();
  r.dataset = std::move(dataset);
  r.split_fingerprint = std::move(split_fingerprint);
  r.total = result.total;
  r.correct = result.correct;
  for (ErrorClass c : kErrorClasses) {
    auto it = result.counts.find(c);
    r.error_counts[std::string(to_string(c))] = it == result.counts.end() ? 0 : it->second;
  }
  r.similarity = result.similarity;
  r.similarity_skipped = result.similarity_skipped;
  return r;
}

std::string render_markdown(std::span<const MetricsReport> reports) {
  std::string out = "| Model | Accuracy | BERTScore |\n|:---|---:|---:|\n";
  for (const auto& r : reports) {
    out += "| " + r.system_name + " | " + fixed(100.0 * r.accuracy(), 1) + "% | " +
           (r.similarity && r.similarity->count > 0 ? fixed(r.similarity->mean, 2) : "---") +
           " |\n";
  }
  const bool any_latency =
      std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.latency; });
  if (any_latency) {
    out += "\n| Model | Threads | T/Q (s) | Load (s) |\n|:---|---:|---:|---:|\n";
    for (const auto& r : reports) {
      if (!r.latency) continue;
      const auto& l = *r.latency;
      out += "| " + r.system_name + " | " + std::to_string(l.worker_threads) + " | " +
             fixed(l.mean_seconds, 2) + " ± " + fixed(l.std_seconds, 2) + " | " +
             fixed(l.load_time_seconds, 2) + " |\n";
    }
  }
  return out;
}

void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(DatasetErrorKind::kUnwritableFile, "cannot open '" + path + "'");
  if (format == ReportFormat::kJson) {
    out << report.to_json();
  } else {
    out << render_markdown(std::span<const MetricsReport>(&report, 1));
  }
  out.flush();
  if (!out) throw DatasetError(DatasetErrorKind::kUnwritableFile, "write failed: " + path);
}

std::vector<std::string> regressions(const MetricsReport& current, const MetricsReport& baseline) {
  std::vector<std::string> out;
  for (ErrorClass c : kErrorClasses) {
    const std::string key(to_string(c));
    const auto count = [&](const MetricsReport& r) -> std::size_t {
      auto it = r.error_counts.find(key);
      return it == r.error_counts.end() ? 0 : it->second;
    };
    const std::size_t cur = count(current);
    const std::size_t base = count(baseline);
    // cur / current.total > base / baseline.total without rounding.
    const bool worse = baseline.total == 0 ? cur > 0 : cur * baseline.total > base * current.total;
    if (worse) out.push_back(key);
  }
  return out;
}

}  // namespace edgeha
