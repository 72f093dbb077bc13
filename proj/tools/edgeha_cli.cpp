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


// Command-line front end: corpus generation, splitting, export, baseline
// training, evaluation, latency benchmarking and the HTTP service.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgeha/baseline_classifier.hpp"
#include "edgeha/dataset.hpp"
#include "edgeha/evaluation.hpp"
#include "edgeha/http_api.hpp"
#include "edgeha/reference_home.hpp"
#include "edgeha/split.hpp"
#include "edgeha/synth.hpp"

namespace {

using namespace edgeha;

struct SplitArgs {
  std::uint64_t seed = 0;
  double fraction = 0.2;
  std::size_t floor = 0;
  bool published_counts = false;
};

void add_split_options(CLI::App* cmd, SplitArgs& a) {
  cmd->add_option("--seed", a.seed, "Split seed");
  cmd->add_option("--test-fraction", a.fraction, "Test share per class")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--floor", a.floor, "Minimum test samples per class");
  cmd->add_flag("--published-counts", a.published_counts,
                "Use the published per-class test counts instead of a fraction");
}

SplitSpec make_spec(const SplitArgs& a) {
  SplitSpec spec;
  spec.seed = a.seed;
  spec.test_fraction = a.fraction;
  spec.floor = a.floor;
  if (a.published_counts) {
    for (const auto& c : reference::class_inventory()) {
      spec.per_class_test[std::string(c.service)] = c.test;
    }
  }
  return spec;
}

Dataset load_reporting(const std::string& path) {
  Dataset d = load_dataset(path);
  std::cerr << "loaded " << d.samples.size() << " samples from " << path << ", "
            << d.quarantined.size() << " quarantined, " << d.multi_intent_count()
            << " multi-intent\n";
  for (const auto& q : d.quarantined) {
    std::cerr << "  record " << q.index << ": " << q.error_class << ": " << q.reason << "\n";
  }
  return d;
}

std::vector<ConversationSample> drop_multi_intent(std::vector<ConversationSample> samples) {
  std::erase_if(samples, [](const ConversationSample& s) { return s.multi_intent(); });
  return samples;
}

std::vector<LabeledPrompt> labeled(const std::vector<ConversationSample>& samples) {
  std::vector<LabeledPrompt> out;
  for (const auto& s : samples) {
    out.push_back({s.user_text, s.gold_action.device, s.gold_action.service});
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgeha: on-device home assistant pipeline and evaluation bench"};
  app.require_subcommand(1);

  // synth
  SynthOptions synth_opts;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic conversation corpus");
  synth->add_option("--samples", synth_opts.samples, "Number of conversations");
  synth->add_option("--seed", synth_opts.seed, "Generator seed");
  synth->add_option("--multi-intent", synth_opts.multi_intent_fraction,
                    "Share of two-action conversations")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--distractors", synth_opts.distractors, "Extra devices per home");
  synth->add_option("--min-per-class", synth_opts.min_per_class, "Minimum samples per class");
  synth->add_option("--out", synth_out, "Output path")->required();

  // split
  SplitArgs split_args;
  std::string split_dataset, split_train_out, split_test_out;
  auto* split = app.add_subcommand("split", "Stratified train/test split");
  split->add_option("--dataset", split_dataset, "Dataset path")->required();
  add_split_options(split, split_args);
  split->add_option("--train-out", split_train_out, "Train split output")->required();
  split->add_option("--test-out", split_test_out, "Test split output")->required();

  // export
  std::string export_dataset, export_out;
  bool export_drop_multi = false;
  auto* exp = app.add_subcommand("export", "Re-export loaded conversations for fine-tuning");
  exp->add_option("--dataset", export_dataset, "Dataset path")->required();
  exp->add_option("--out", export_out, "Output path")->required();
  exp->add_flag("--drop-multi-intent", export_drop_multi, "Skip two-action conversations");

  // train-baseline
  std::string train_dataset, train_out;
  TrainOptions train_opts;
  auto* train = app.add_subcommand("train-baseline", "Train the TF-IDF linear baseline");
  train->add_option("--dataset", train_dataset, "Training conversations")->required();
  train->add_option("--out", train_out, "Model output path")->required();
  train->add_option("--epochs", train_opts.epochs, "Epochs");
  train->add_option("--learning-rate", train_opts.learning_rate, "Initial learning rate");
  train->add_option("--lambda", train_opts.lambda, "L2 regularization");
  train->add_option("--seed", train_opts.seed, "Visiting-order seed");

  // eval
  std::string eval_dataset, eval_backend, eval_baseline, eval_embeddings, eval_json, eval_md,
      eval_compare;
  bool eval_replay = false;
  std::size_t eval_limit = 0;
  auto* eval = app.add_subcommand("eval", "Exact-match and similarity evaluation");
  eval->add_option("--dataset", eval_dataset, "Evaluation conversations")->required();
  auto* sys_group = eval->add_option_group("system");
  sys_group->add_option("--backend-config", eval_backend, "Backend config JSON");
  sys_group->add_option("--baseline", eval_baseline, "Baseline model file");
  sys_group->add_flag("--replay", eval_replay, "Replay the gold assistant turns");
  sys_group->require_option(1);
  eval->add_option("--limit", eval_limit, "Evaluate only the first N samples");
  eval->add_option("--embeddings", eval_embeddings, "Token embedding table for similarity");
  eval->add_option("--report-json", eval_json, "JSON report path");
  eval->add_option("--report-md", eval_md, "Markdown report path");
  eval->add_option("--compare-to", eval_compare,
                   "Previous JSON report; exit 3 if any error class rate grew");

  // bench
  std::string bench_dataset, bench_backend, bench_json, bench_md;
  std::size_t bench_samples = 500;
  std::vector<int> bench_threads{4};
  auto* bench = app.add_subcommand("bench", "Mean time per query on CPU");
  bench->add_option("--dataset", bench_dataset, "Prompts to replay")->required();
  bench->add_option("--backend-config", bench_backend, "Backend config JSON")->required();
  bench->add_option("--samples", bench_samples, "Measured queries");
  bench->add_option("--threads", bench_threads, "Worker thread counts to measure");
  bench->add_option("--report-json", bench_json, "JSON report path (last thread count)");
  bench->add_option("--report-md", bench_md, "Markdown latency table path");

  // serve
  std::string serve_backend, serve_host = "127.0.0.1", serve_snapshot;
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP assistant service");
  serve->add_option("--backend-config", serve_backend, "Backend config JSON");
  serve->add_option("--host", serve_host, "Listen address");
  serve->add_option("--port", serve_port, "Listen port (0 picks one)");
  serve->add_option("--snapshot", serve_snapshot,
                    "Session snapshot file, restored at start and written on shutdown");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      export_training_corpus(synth_corpus(synth_opts), synth_out);
      std::cerr << "wrote " << synth_opts.samples << " conversations to " << synth_out << "\n";
    } else if (*split) {
      const Dataset d = load_reporting(split_dataset);
      const SplitResult r = stratified_split(d.samples, make_spec(split_args));
      export_training_corpus(select(d.samples, r.train), split_train_out);
      export_training_corpus(select(d.samples, r.test), split_test_out);
      std::cout << "train " << r.train.size() << " test " << r.test.size() << " fingerprint "
                << r.fingerprint << "\n";
    } else if (*exp) {
      Dataset d = load_reporting(export_dataset);
      auto samples = export_drop_multi ? drop_multi_intent(std::move(d.samples)) : d.samples;
      export_training_corpus(samples, export_out);
      std::cout << "exported " << samples.size() << " conversations\n";
    } else if (*train) {
      const auto samples = drop_multi_intent(load_reporting(train_dataset).samples);
      const BaselineModel model = train_baseline(labeled(samples), train_opts);
      model.save(train_out);
      std::cout << "trained on " << samples.size() << " samples, "
                << model.classifier.labels().size() << " labels, vocabulary "
                << model.vectorizer.size() << "\n";
    } else if (*eval) {
      Dataset d = load_reporting(eval_dataset);
      std::vector<ConversationSample> samples = std::move(d.samples);
      std::unique_ptr<SystemUnderTest> system;
      if (!eval_baseline.empty()) {
        samples = drop_multi_intent(std::move(samples));
        system = std::make_unique<BaselineSystem>(
            std::make_shared<BaselineModel>(BaselineModel::load(eval_baseline)));
      } else if (eval_replay) {
        system = std::make_unique<BackendSystem>(
            load_scripted_backend(BackendConfig{}, replay_script(samples)).handle);
      } else {
        system = std::make_unique<BackendSystem>(
            load_backend(BackendConfig::load(eval_backend)).handle);
      }
      if (eval_limit && eval_limit < samples.size()) samples.resize(eval_limit);
      std::optional<EmbeddingTable> table;
      if (!eval_embeddings.empty()) table = EmbeddingTable::load(eval_embeddings);
      const auto result = evaluate_slot_intent(*system, samples, table ? &*table : nullptr);
      SplitSpec whole;
      whole.test_fraction = 1.0;
      const auto fingerprint = stratified_split(samples, whole).fingerprint;
      const MetricsReport report = make_report(
          *system, result, std::filesystem::path(eval_dataset).filename().string(), fingerprint);
      std::cout << render_markdown(std::span<const MetricsReport>(&report, 1));
      for (const auto& [cls, n] : report.error_counts) {
        if (n) std::cout << "  " << cls << ": " << n << "\n";
      }
      if (!eval_json.empty()) emit_report(report, ReportFormat::kJson, eval_json);
      if (!eval_md.empty()) emit_report(report, ReportFormat::kMarkdown, eval_md);
      if (!eval_compare.empty()) {
        const auto previous = MetricsReport::from_json(read_text(eval_compare));
        const auto worse = regressions(report, previous);
        if (!worse.empty()) {
          std::cerr << "error-class regression vs " << eval_compare << ":";
          for (const auto& w : worse) std::cerr << " " << w;
          std::cerr << "\n";
          return 3;
        }
      }
    } else if (*bench) {
      const auto samples = load_reporting(bench_dataset).samples;
      const BackendConfig config = BackendConfig::load(bench_backend);
      std::vector<MetricsReport> reports;
      for (int threads : bench_threads) {
        MetricsReport r;
        r.system_name = config.model.label();
        r.backend = std::string(to_string(config.kind));
        r.model = config.model;
        r.dataset = std::filesystem::path(bench_dataset).filename().string();
        r.latency = benchmark_latency(config, samples, bench_samples, threads,
                                      config.kind == BackendKind::kScripted
                                          ? replay_script(samples)
                                          : nullptr);
        reports.push_back(std::move(r));
      }
      std::string table = render_markdown(reports);
      table = table.substr(table.find("\n\n") + 2);
      std::cout << table;
      if (!bench_json.empty()) write_text(bench_json, reports.back().to_json());
      if (!bench_md.empty()) write_text(bench_md, table);
    } else if (*serve) {
      BackendConfig config;
      config.scripted_default = "{echo}";
      LoadedBackend loaded;
      if (serve_backend.empty()) {
        auto script = std::make_unique<ScriptedBackend>();
        script->add(std::string(reference::kSystemText), std::string(reference::kUserText),
                    std::string(reference::kAssistantText));
        loaded = load_scripted_backend(config, std::move(script));
      } else {
        loaded = load_backend(BackendConfig::load(serve_backend));
      }
      AssistantService service(loaded.handle);
      if (!serve_snapshot.empty() && std::filesystem::exists(serve_snapshot)) {
        service.load_snapshot(serve_snapshot);
      }
      HttpServer server(service);
      const int port = server.bind(serve_host, serve_port);
      if (port < 0) {
        std::cerr << "cannot bind " << serve_host << ":" << serve_port << "\n";
        return 1;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << serve_host << ":" << port << " (model "
                << loaded.handle->config().model.label() << ", load "
                << loaded.load_time_seconds << " s)\n";
      server.serve();
      g_server = nullptr;
      if (!serve_snapshot.empty()) service.save_snapshot(serve_snapshot);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
