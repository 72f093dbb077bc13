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


// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails. `--only core-scaling` runs the
// multi-core scaling check alone and exits 77 when it cannot be measured.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "edgeha/action_parser.hpp"
#include "edgeha/assistant_service.hpp"
#include "edgeha/baseline_classifier.hpp"
#include "edgeha/corruption.hpp"
#include "edgeha/evaluation.hpp"
#include "edgeha/home_simulator.hpp"
#include "edgeha/http_api.hpp"
#include "edgeha/reference_home.hpp"
#include "edgeha/similarity.hpp"
#include "edgeha/split.hpp"
#include "edgeha/synth.hpp"
#include "support/fuzz_home.hpp"

using namespace edgeha;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

enum class Verdict { kPass, kFail, kSkip };

struct Result {
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

Result pass(std::string detail) { return {Verdict::kPass, std::move(detail)}; }
Result fail(std::string detail) { return {Verdict::kFail, std::move(detail)}; }
Result skip(std::string detail) { return {Verdict::kSkip, std::move(detail)}; }
Result verdict(bool ok, std::string detail) { return ok ? pass(detail) : fail(detail); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const std::vector<ConversationSample>& corpus() {
  static const std::vector<ConversationSample> samples = [] {
    SynthOptions opts;
    opts.samples = 2000;
    opts.seed = 2024;
    return synth_corpus(opts);
  }();
  return samples;
}

Result replay_oracle() {
  const auto start = Clock::now();
  const auto& samples = corpus();
  std::size_t exact = 0;
  for (const auto& s : samples) {
    const auto out = parse_assistant_output(s.gold_text, s.context.catalog, s.context.registry);
    exact += out.outcome == Outcome::kOk && out.raw_action &&
             out.raw_action->service == s.gold_action.service &&
             out.raw_action->device == s.gold_action.device;
  }
  BackendSystem system(load_scripted_backend(BackendConfig{}, replay_script(samples)).handle);
  const auto r = evaluate_slot_intent(system, samples);
  std::size_t errors = 0;
  for (ErrorClass c : kErrorClasses) errors += r.counts.at(c);
  const double elapsed = seconds_since(start);
  return verdict(samples.size() >= 500 && exact == samples.size() && r.correct == r.total &&
                     errors == 0 && elapsed < 30.0,
                 fmt("%zu samples, accuracy %.1f%%, %zu error-class hits, gold parse %zu/%zu, "
                     "%.2f s (limit 30 s)",
                     r.total, 100.0 * r.accuracy(), errors, exact, samples.size(), elapsed));
}

Result corruption_taxonomy() {
  const auto& samples = corpus();
  const double rate = 0.10;
  const auto plan = inject_corruptions(samples, rate, 7);
  BackendSystem system(
      load_scripted_backend(BackendConfig{}, script_outputs(samples, plan.outputs)).handle);
  const auto r = evaluate_slot_intent(system, samples);
  bool ok = !plan.injections.empty();
  std::string detail;
  std::map<ErrorClass, std::size_t> expected;
  for (const auto& [kind, n] : plan.counts) expected[designated_error(kind)] += n;
  for (ErrorClass c : kErrorClasses) {
    const std::size_t want = expected.count(c) ? expected[c] : 0;
    ok = ok && r.counts.at(c) == want;
    if (want) detail += fmt("%s %zu/%zu, ", std::string(to_string(c)).c_str(), r.counts.at(c), want);
  }
  const std::size_t injected = plan.injections.size();
  ok = ok && r.correct == samples.size() - injected &&
       r.accuracy() == 1.0 - static_cast<double>(injected) / static_cast<double>(samples.size());
  detail += fmt("accuracy %zu/%zu = %.4f with %zu injections at rate %.2f", r.correct, r.total,
                r.accuracy(), injected, rate);
  return verdict(ok, detail);
}

Result codec_round_trip() {
  SplitMix64 rng(1234);
  std::size_t equal = 0;
  for (int i = 0; i < 1000; ++i) {
    const SystemContext ctx = testing::random_context(rng);
    equal += parse_system_prompt(render_system_prompt(ctx)) == ctx;
  }
  const auto home = parse_system_prompt(reference::kSystemText);
  return verdict(equal == 1000 && home.catalog.size() == 28 && home.registry.size() == 6,
                 fmt("%zu/1000 fuzzed homes round-trip; reference text has %zu services, "
                     "%zu devices",
                     equal, home.catalog.size(), home.registry.size()));
}

Result simulator_oracle() {
  std::ifstream in(std::string(EDGEHA_FIXTURE_DIR) + "/transition_oracle.tsv");
  if (!in) return fail("oracle table missing");
  std::map<std::pair<std::string, std::string>, std::string> oracle;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::string service, prior, next;
    std::getline(f, service, '\t');
    std::getline(f, prior, '\t');
    std::getline(f, next, '\t');
    oracle[{service, prior}] = next;
  }
  const TransitionTable table = default_transition_table(reference::builtin_catalog());
  std::size_t pairs = 0, matched = 0, toggles = 0, involutive = 0;
  for (const ServiceRule* rule : table.rules()) {
    const auto service = ServiceSignature::make(rule->domain, rule->name);
    for (const auto& prior : enumeration_states(rule->domain)) {
      ++pairs;
      const auto it = oracle.find({service.canonical(), prior});
      const DeviceState next = table.apply(service, DeviceState{prior, {}});
      matched += it != oracle.end() && it->second == next.primary_state;
      if (rule->toggle) {
        ++toggles;
        involutive += table.apply(service, next) == DeviceState{prior, {}};
      }
    }
  }
  const auto up = ServiceSignature::parse("media_player.volume_up");
  const auto down = ServiceSignature::parse("media_player.volume_down");
  SplitMix64 rng(77);
  std::size_t walks_ok = 0;
  for (int w = 0; w < 1000; ++w) {
    DeviceState s{"on", {{"vol", static_cast<double>(rng.below(101)) / 100.0}}};
    bool inside = true;
    for (int step = 0; step < 100; ++step) {
      s = table.apply(rng.below(2) ? up : down, s);
      const double v = std::get<double>(*s.attributes.find("vol"));
      inside = inside && v >= 0.0 && v <= 1.0;
    }
    walks_ok += inside;
  }
  return verdict(matched == pairs && pairs == oracle.size() && involutive == toggles &&
                     walks_ok == 1000,
                 fmt("%zu/%zu (service, state) pairs match %zu oracle rows; %zu/%zu toggle "
                     "involutions; %zu/1000 volume walks in [0, 1]",
                     matched, pairs, oracle.size(), involutive, toggles, walks_ok));
}

Result baseline() {
  const auto start = Clock::now();
  std::vector<ConversationSample> single;
  for (const auto& s : corpus()) {
    if (!s.multi_intent()) single.push_back(s);
  }
  SplitSpec spec;
  spec.seed = 11;
  spec.test_fraction = 0.2;
  const auto split = stratified_split(single, spec);
  const auto train = select(single, split.train);
  const auto test = select(single, split.test);
  std::vector<LabeledPrompt> labeled;
  for (const auto& s : train) labeled.push_back({s.user_text, s.gold_action.device, s.gold_action.service});
  TrainOptions opts;
  opts.seed = 5;
  auto model = std::make_shared<BaselineModel>(train_baseline(labeled, opts));
  const auto again = train_baseline(labeled, opts);
  const bool deterministic = again.classifier == model->classifier && again.to_json() == model->to_json();
  BaselineSystem system(model);
  const auto r = evaluate_slot_intent(system, test);
  const double elapsed = seconds_since(start);
  return verdict(r.accuracy() >= 0.70 && deterministic && elapsed < 120.0,
                 fmt("%zu samples (%zu train / %zu test), %zu labels, accuracy %.1f%% (floor 70%%), "
                     "deterministic %s, %.2f s (limit 120 s)",
                     single.size(), train.size(), test.size(), model->classifier.labels().size(),
                     100.0 * r.accuracy(), deterministic ? "yes" : "no", elapsed));
}

Result semantic_scorer() {
  EmbeddingTable table(50);
  SplitMix64 rng(3);
  const auto text = [&] {
    std::string out;
    const std::size_t words = 1 + rng.below(10);
    for (std::size_t w = 0; w < words; ++w) {
      if (w) out += ' ';
      out += testing::token(rng);
    }
    return out;
  };
  double worst = 0.0;
  std::size_t symmetric = 0;
  for (int i = 0; i < 100; ++i) {
    const std::string a = text();
    const std::string b = text();
    worst = std::max(worst, std::abs(score_similarity(a, a, table).f1 - 1.0));
    const auto ab = score_similarity(a, b, table);
    const auto ba = score_similarity(b, a, table);
    symmetric += ab.precision == ba.recall;
  }
  EmbeddingTable toy(3);
  toy.add("a", {1, 0, 0});
  toy.add("b", {0.6, 0.8, 0});
  toy.add("c", {0, 0.6, 0.8});
  const auto s = score_similarity("a", "b c", toy);
  const bool fixture = std::abs(s.precision - 0.6) <= 1e-9 && std::abs(s.recall - 0.3) <= 1e-9 &&
                       std::abs(s.f1 - 0.4) <= 1e-9;
  return verdict(worst <= 1e-6 && symmetric == 100 && fixture,
                 fmt("self-score max deviation %.2e; P(a,b)=R(b,a) %zu/100; toy F1 %.12f "
                     "(expected 0.4)",
                     worst, symmetric, s.f1));
}

Result latency_honesty() {
  std::string detail;
  bool ok = true;
  const std::vector<std::pair<double, std::size_t>> runs = {{0.05, 20}, {0.5, 6}, {2.0, 3}};
  for (const auto& [d, n] : runs) {
    BackendConfig c;
    c.kind = BackendKind::kStub;
    c.stub_query_seconds = d;
    const auto stats = benchmark_latency(c, corpus(), n, 1);
    const bool inside = stats.mean_seconds >= d && stats.mean_seconds <= d + 0.02;
    ok = ok && inside;
    detail += fmt("D=%.2f mean %.4f s over %zu; ", d, stats.mean_seconds, n);
  }
  detail += "band [D, D+0.02]";
  return verdict(ok, detail);
}

Result core_scaling() {
  const unsigned cores = std::thread::hardware_concurrency();
  // Calibrate so a four-thread query does about 0.25 s of work.
  const auto t0 = Clock::now();
  const std::uint64_t probe = 20'000'000;
  volatile std::uint64_t sink = burn_cpu_serial(probe);
  (void)sink;
  const double per_iter = seconds_since(t0) / static_cast<double>(probe);
  BackendConfig c;
  c.kind = BackendKind::kStub;
  c.stub_cpu_work = static_cast<std::uint64_t>(1.0 / per_iter);
  const auto two = benchmark_latency(c, corpus(), 5, 2);
  const auto four = benchmark_latency(c, corpus(), 5, 4);
  const double ratio = two.mean_seconds / four.mean_seconds;
  const std::string detail = fmt("T/Q %.3f s at 2 threads, %.3f s at 4 threads, ratio %.2f "
                                 "(target 2.0 within 25%%), %u hardware threads",
                                 two.mean_seconds, four.mean_seconds, ratio, cores);
  if (cores < 4) return skip(detail + "; needs at least 4");
  return verdict(ratio >= 1.5 && ratio <= 2.5, detail);
}

Result service_pipeline() {
  auto script = std::make_unique<ScriptedBackend>("I can't see a device for that.");
  script->add(std::string(reference::kUserText), std::string(reference::kAssistantText));
  AssistantService service(load_scripted_backend(BackendConfig{}, std::move(script)).handle);
  HttpServer server(service);
  const int port = server.start("127.0.0.1", 0);
  if (port <= 0) return fail("could not bind a local port");
  httplib::Client client("127.0.0.1", port);

  const auto state_of = [&](const std::string& id) {
    auto res = client.Get("/sessions/" + id + "/devices");
    if (!res) return std::string("?");
    const auto doc = nlohmann::json::parse(res->body);
    for (const auto& d : doc["devices"]) {
      if (d["id"] == "cover.master_bedroom") return d["state"].get<std::string>();
    }
    return std::string("?");
  };

  auto created = client.Post("/sessions", "", "application/json");
  if (!created || created->status != 201) return fail("session creation failed");
  const std::string id = nlohmann::json::parse(created->body)["session_id"];
  const std::string before = state_of(id);
  auto chat = client.Post("/sessions/" + id + "/chat",
                          nlohmann::json{{"text", reference::kUserText}}.dump(), "application/json");
  if (!chat) return fail("chat request failed");
  const auto reply = nlohmann::json::parse(chat->body);
  const std::string after = state_of(id);
  const bool end_to_end = reply["outcome"] == "Ok" &&
                          reply["response_text"] == reference::kResponseText &&
                          before == "closed" && after == "open";

  const auto created2 = client.Post("/sessions", "", "application/json");
  const std::string id2 = nlohmann::json::parse(created2->body)["session_id"];
  auto fb = client.Post("/sessions/" + id2 + "/chat",
                        nlohmann::json{{"text", "dance for me"}}.dump(), "application/json");
  const auto fb_reply = nlohmann::json::parse(fb->body);
  const bool fallback = fb_reply["outcome"] == "Fallback" && fb_reply["new_state"].is_null() &&
                        state_of(id2) == "closed";

  SplitMix64 rng(4242);
  std::size_t answered = 0, faults = 0;
  std::map<int, std::size_t> statuses;
  for (int i = 0; i < 10000; ++i) {
    std::string bytes;
    const std::size_t n = rng.below(96);
    for (std::size_t k = 0; k < n; ++k) bytes += static_cast<char>(rng.below(256));
    const std::string body =
        i % 2 ? bytes
              : nlohmann::json{{"text", bytes}}.dump(-1, ' ', false,
                                                     nlohmann::json::error_handler_t::replace);
    auto res = client.Post("/sessions/" + id2 + "/chat", body, "application/json");
    if (!res) {
      ++faults;
      continue;
    }
    ++statuses[res->status];
    answered += res->status == 200 || res->status == 400;
    faults += res->status >= 500;
  }
  auto health = client.Get("/healthz");
  const bool alive = health && health->status == 200;
  server.stop();
  return verdict(end_to_end && fallback && faults == 0 && answered == 10000 && alive,
                 fmt("reference command %s (closed -> %s); no-fence fallback %s; 10000 random "
                     "bodies: %zu x 200, %zu x 400, %zu faults; server alive %s",
                     end_to_end ? "ok" : "FAILED", after.c_str(),
                     fallback ? "ok" : "FAILED", statuses[200], statuses[400], faults,
                     alive ? "yes" : "no"));
}

Result real_model_latency() {
  const char* path = std::getenv("EDGEHA_EXTERNAL_CONFIG");
  if (!path || !*path) {
    return skip("report-only; set EDGEHA_EXTERNAL_CONFIG to an external backend config to measure "
                "T/Q against the reference 6.25 s (16-bit) and 5.50 s (8-bit) on 4 cores");
  }
  try {
    const BackendConfig c = BackendConfig::load(path);
    const auto stats = benchmark_latency(c, corpus(), 20, c.worker_threads);
    return pass(fmt("report-only: %s T/Q %.2f s (std %.2f), load %.2f s, %d threads; reference "
                    "6.25 s (16-bit) / 5.50 s (8-bit)",
                    c.model.label().c_str(), stats.mean_seconds, stats.std_seconds,
                    stats.load_time_seconds, c.worker_threads));
  } catch (const std::exception& e) {
    return skip(std::string("report-only; external backend unavailable: ") + e.what());
  }
}

struct Criterion {
  const char* name;
  std::function<Result()> run;
  bool gating;
};

int report(const Criterion& c, const Result& r) {
  const char* tag = r.verdict == Verdict::kPass ? "PASS" : r.verdict == Verdict::kSkip ? "SKIP" : "FAIL";
  std::printf("%s %s: %s\n", tag, c.name, r.detail.c_str());
  std::fflush(stdout);
  return r.verdict == Verdict::kFail && c.gating ? 1 : 0;
}

Result guarded(const Criterion& c) {
  try {
    return c.run();
  } catch (const std::exception& e) {
    return fail(std::string("exception: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 2 && std::string(argv[1]) == "--only" ? argv[2] : "";
  if (only == "core-scaling") {
    const Criterion c{"core-scaling", core_scaling, true};
    const Result r = guarded(c);
    report(c, r);
    return r.verdict == Verdict::kPass ? 0 : r.verdict == Verdict::kSkip ? 77 : 1;
  }
  const std::vector<Criterion> criteria = {
      {"replay-oracle", replay_oracle, true},
      {"corruption-taxonomy", corruption_taxonomy, true},
      {"codec-round-trip", codec_round_trip, true},
      {"simulator-oracle", simulator_oracle, true},
      {"baseline-classifier", baseline, true},
      {"semantic-scorer", semantic_scorer, true},
      {"latency-honesty", latency_honesty, true},
      {"service-pipeline", service_pipeline, true},
      {"real-model-latency", real_model_latency, false},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    failures += report(c, guarded(c));
  }
  return failures == 0 ? 0 : 1;
}
