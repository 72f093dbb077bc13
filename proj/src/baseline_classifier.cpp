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

#include "edgeha/baseline_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgeha/action_parser.hpp"
#include "edgeha/random.hpp"

namespace edgeha {

namespace {

constexpr std::string_view kModelFormat = "edgeha-baseline";
constexpr int kModelVersion = 1;

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

BaselineError::BaselineError(BaselineErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

double SparseVector::dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) sum += value[k] * dense[index[k]];
  return sum;
}

double SparseVector::norm() const {
  double sum = 0.0;
  for (double v : value) sum += v * v;
  return std::sqrt(sum);
}

TfidfVectorizer TfidfVectorizer::fit(std::span<const std::string> corpus) {
  if (corpus.empty()) throw BaselineError(BaselineErrorKind::kEmptyCorpus, "empty corpus");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    const auto tokens = tokenize(doc);
    for (const auto& token : std::set<std::string>(tokens.begin(), tokens.end())) ++df[token];
  }
  std::vector<std::string> vocabulary;
  std::vector<double> idf;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [token, count] : df) {
    vocabulary.push_back(token);
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return from_parts(std::move(vocabulary), std::move(idf), corpus.size());
}

TfidfVectorizer TfidfVectorizer::from_parts(std::vector<std::string> vocabulary,
                                            std::vector<double> idf,
                                            std::size_t document_count) {
  if (vocabulary.size() != idf.size()) {
    throw BaselineError(BaselineErrorKind::kBadModelFile, "vocabulary/idf size mismatch");
  }
  TfidfVectorizer v;
  v.vocabulary_ = std::move(vocabulary);
  v.idf_ = std::move(idf);
  v.document_count_ = document_count;
  for (std::uint32_t i = 0; i < v.vocabulary_.size(); ++i) v.columns_.emplace(v.vocabulary_[i], i);
  return v;
}

long TfidfVectorizer::column(std::string_view token) const {
  auto it = columns_.find(std::string(token));
  return it == columns_.end() ? -1 : static_cast<long>(it->second);
}

double TfidfVectorizer::idf(std::string_view token) const {
  const long c = column(token);
  return c < 0 ? 0.0 : idf_[static_cast<std::size_t>(c)];
}

SparseVector TfidfVectorizer::transform(std::string_view text) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& token : tokenize(text)) {
    if (auto it = columns_.find(token); it != columns_.end()) counts[it->second] += 1.0;
  }
  SparseVector out;
  out.index.reserve(counts.size());
  out.value.reserve(counts.size());
  for (const auto& [col, count] : counts) {
    out.index.push_back(col);
    out.value.push_back(count * idf_[col]);
  }
  const double norm = out.norm();
  if (norm > 0) {
    for (double& v : out.value) v /= norm;
  }
  return out;
}

std::vector<SparseVector> TfidfVectorizer::transform_all(std::span<const std::string> texts,
                                                         Exec exec) const {
  std::vector<SparseVector> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
  if (exec == Exec::kParallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) out[i] = transform(texts[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) out[i] = transform(texts[i]);
  }
  return out;
}

std::string joint_label(std::string_view device, std::string_view service) {
  std::string label(device);
  label += '|';
  label += service;
  return label;
}

LinearOvrModel::LinearOvrModel(std::vector<std::string> labels, std::size_t dimension)
    : labels_(std::move(labels)),
      dimension_(dimension),
      weights_(labels_.size() * dimension, 0.0),
      bias_(labels_.size(), 0.0) {}

std::span<const double> LinearOvrModel::weights(std::size_t label) const {
  return std::span<const double>(weights_).subspan(label * dimension_, dimension_);
}

std::span<double> LinearOvrModel::weights(std::size_t label) {
  return std::span<double>(weights_).subspan(label * dimension_, dimension_);
}

std::vector<double> LinearOvrModel::scores(const SparseVector& x) const {
  std::vector<double> out(labels_.size());
  for (std::size_t l = 0; l < labels_.size(); ++l) out[l] = x.dot(weights(l)) + bias_[l];
  return out;
}

std::size_t LinearOvrModel::predict(const SparseVector& x) const {
  const auto s = scores(x);
  std::size_t best = 0;
  for (std::size_t l = 1; l < s.size(); ++l) {
    if (s[l] > s[best]) best = l;
  }
  return best;
}

namespace {

// Pegasos-style update on w = scale * v so the L2 shrink costs O(1).
void train_one(const LinearOvrModel& shape, std::size_t label,
               std::span<const SparseVector> features, std::span<const std::size_t> targets,
               const std::vector<std::vector<std::size_t>>& order, const TrainOptions& options,
               std::span<double> w, double& b) {
  std::vector<double> v(shape.dimension(), 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::uint64_t t = 0;
  for (const auto& epoch : order) {
    for (std::size_t i : epoch) {
      ++t;
      const double eta =
          options.learning_rate / (1.0 + options.learning_rate * options.lambda * static_cast<double>(t));
      const double y = targets[i] == label ? 1.0 : -1.0;
      const SparseVector& x = features[i];
      const double margin = y * (scale * x.dot(v) + bias);
      scale *= 1.0 - eta * options.lambda;
      if (margin < 1.0) {
        const double step = eta * y / scale;
        for (std::size_t k = 0; k < x.index.size(); ++k) v[x.index[k]] += step * x.value[k];
        bias += eta * y;
      }
      if (scale < 1e-9) {
        for (double& vi : v) vi *= scale;
        scale = 1.0;
      }
    }
  }
  for (std::size_t d = 0; d < v.size(); ++d) w[d] = scale * v[d];
  b = bias;
}

}  // namespace

LinearOvrModel train(std::span<const SparseVector> features, std::span<const std::string> labels,
                     std::size_t dimension, const TrainOptions& options, Exec exec) {
  if (features.size() != labels.size()) {
    throw std::invalid_argument("features and labels differ in length");
  }
  std::vector<std::string> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    throw BaselineError(BaselineErrorKind::kDegenerateLabels,
                        "training needs at least two distinct labels");
  }
  for (const auto& x : features) {
    if (!x.index.empty() && x.index.back() >= dimension) {
      throw std::invalid_argument("feature index beyond model dimension");
    }
  }

  std::vector<std::size_t> targets(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    targets[i] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
  }

  // One shared visiting order per epoch, drawn up front.
  SplitMix64 rng(options.seed);
  std::vector<std::vector<std::size_t>> order(static_cast<std::size_t>(std::max(options.epochs, 0)));
  for (auto& epoch : order) {
    epoch.resize(features.size());
    std::iota(epoch.begin(), epoch.end(), std::size_t{0});
    shuffle(epoch, rng);
  }

  LinearOvrModel model(std::move(distinct), dimension);
  const auto n_labels = static_cast<std::int64_t>(model.labels().size());
  const auto fit = [&](std::int64_t l) {
    const auto label = static_cast<std::size_t>(l);
    train_one(model, label, features, targets, order, options, model.weights(label),
              model.bias(label));
  };
  if (exec == Exec::kParallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t l = 0; l < n_labels; ++l) fit(l);
  } else {
    for (std::int64_t l = 0; l < n_labels; ++l) fit(l);
  }
  return model;
}

BaselineModel train_baseline(std::span<const LabeledPrompt> samples, const TrainOptions& options,
                             Exec exec) {
  std::vector<std::string> prompts;
  std::vector<std::string> labels;
  prompts.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    prompts.push_back(s.prompt);
    labels.push_back(joint_label(s.device, s.service));
  }
  BaselineModel model;
  model.vectorizer = TfidfVectorizer::fit(prompts);
  const auto features = model.vectorizer.transform_all(prompts, exec);
  model.classifier = train(features, labels, model.vectorizer.size(), options, exec);
  model.options = options;
  model.training_samples = samples.size();
  return model;
}

std::string BaselineModel::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["metadata"] = {{"epochs", options.epochs},
                   {"learning_rate", options.learning_rate},
                   {"lambda", options.lambda},
                   {"seed", options.seed},
                   {"training_samples", training_samples},
                   {"features", "unigram tf-idf, min_df=1, l2"},
                   {"loss", "hinge, one-vs-rest"}};
  j["document_count"] = vectorizer.document_count();
  j["vocabulary"] = vectorizer.vocabulary();
  j["idf"] = vectorizer.idf();
  j["labels"] = classifier.labels();
  j["dimension"] = classifier.dimension();
  auto weights = nlohmann::ordered_json::array();
  auto bias = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < classifier.labels().size(); ++l) {
    const auto w = classifier.weights(l);
    weights.push_back(std::vector<double>(w.begin(), w.end()));
    bias.push_back(classifier.bias(l));
  }
  j["weights"] = std::move(weights);
  j["bias"] = std::move(bias);
  return j.dump();
}

BaselineModel BaselineModel::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw BaselineError(BaselineErrorKind::kBadModelFile, "not a baseline model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw BaselineError(BaselineErrorKind::kBadModelFile,
                          "unsupported model version " + j.at("version").dump());
    }
    BaselineModel m;
    const auto& meta = j.at("metadata");
    m.options.epochs = meta.at("epochs").get<int>();
    m.options.learning_rate = meta.at("learning_rate").get<double>();
    m.options.lambda = meta.at("lambda").get<double>();
    m.options.seed = meta.at("seed").get<std::uint64_t>();
    m.training_samples = meta.at("training_samples").get<std::size_t>();
    m.vectorizer = TfidfVectorizer::from_parts(j.at("vocabulary").get<std::vector<std::string>>(),
                                               j.at("idf").get<std::vector<double>>(),
                                               j.at("document_count").get<std::size_t>());
    const auto dimension = j.at("dimension").get<std::size_t>();
    m.classifier = LinearOvrModel(j.at("labels").get<std::vector<std::string>>(), dimension);
    const auto& weights = j.at("weights");
    const auto& bias = j.at("bias");
    if (weights.size() != m.classifier.labels().size() || bias.size() != weights.size()) {
      throw BaselineError(BaselineErrorKind::kBadModelFile, "weights/labels size mismatch");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
      const auto row = weights[l].get<std::vector<double>>();
      if (row.size() != dimension) {
        throw BaselineError(BaselineErrorKind::kBadModelFile, "weight row has wrong dimension");
      }
      std::copy(row.begin(), row.end(), m.classifier.weights(l).begin());
      m.classifier.bias(l) = bias[l].get<double>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw BaselineError(BaselineErrorKind::kBadModelFile, e.what());
  }
}

void BaselineModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BaselineError(BaselineErrorKind::kBadModelFile, "cannot write '" + path + "'");
  out << to_json() << '\n';
}

BaselineModel BaselineModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BaselineError(BaselineErrorKind::kBadModelFile, "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string BaselinePrediction::assistant_text() const {
  return format_assistant_text(response_text, raw_action(), "device");
}

BaselinePrediction predict(std::string_view prompt, const BaselineModel& model,
                           const DeviceRegistry* registry) {
  const auto x = model.vectorizer.transform(prompt);
  const std::string& label = model.classifier.labels()[model.classifier.predict(x)];
  BaselinePrediction out;
  const auto bar = label.find('|');
  out.device = label.substr(0, bar);
  out.service = bar == std::string::npos ? std::string() : label.substr(bar + 1);
  std::string name = out.device;
  if (registry) {
    if (const Device* d = registry->find(out.device)) name = d->friendly_name;
  }
  out.response_text = "Okay, executing " + out.service + " on " + name + ".";
  return out;
}

}  // namespace edgeha
