// Copyright 2026 The Parley Authors.
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

#include "parley/svm.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "parley/prng.h"

namespace parley {

namespace {

using Json = nlohmann::json;

// Weight vector stored as scale * values so the per-step shrink is O(1).
class ScaledVector {
 public:
  explicit ScaledVector(std::size_t dim) : values_(dim + 1, 0.0) {}

  // Dot product with [x ; 1].
  double Dot(const FeatureVector& x) const {
    double sum = values_.back();
    for (const auto& [index, value] : x.entries()) sum += values_[index] * value;
    return scale_ * sum;
  }

  void Shrink(double factor) {
    if (factor == 0.0) {
      std::fill(values_.begin(), values_.end(), 0.0);
      scale_ = 1.0;
      return;
    }
    scale_ *= factor;
  }

  // this += step * [x ; 1]
  void AddScaled(const FeatureVector& x, double step) {
    const double adjusted = step / scale_;
    for (const auto& [index, value] : x.entries()) values_[index] += adjusted * value;
    values_.back() += adjusted;
  }

  std::vector<double> Materialize() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = scale_ * values_[i];
    return out;
  }

 private:
  std::vector<double> values_;
  double scale_ = 1.0;
};

}  // namespace

SvmModel TrainSvm(std::span<const FeatureVector> features, std::span<const int> labels,
                  const SvmConfig& config, FeatureMode mode) {
  if (features.size() != labels.size()) {
    throw std::invalid_argument("feature and label counts differ");
  }
  if (!(config.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (config.epochs == 0) throw std::invalid_argument("epochs must be positive");
  bool has_positive = false;
  bool has_negative = false;
  for (int label : labels) {
    if (label == 1) {
      has_positive = true;
    } else if (label == -1) {
      has_negative = true;
    } else {
      throw std::invalid_argument("labels must be +1 or -1");
    }
  }
  if (!has_positive || !has_negative) {
    throw std::invalid_argument("training data needs both classes");
  }
  const std::size_t dim = features.front().dimension();
  for (const FeatureVector& x : features) {
    if (x.dimension() != dim) throw std::invalid_argument("inconsistent feature dimensions");
  }

  ScaledVector w(dim);
  std::vector<double> average(dim + 1, 0.0);
  std::size_t averaged = 0;
  Lcg64 rng(config.seed);
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.UniformIndex(i)]);
    }
    for (std::size_t index : order) {
      ++t;
      const double eta = 1.0 / (config.lambda * static_cast<double>(t));
      const double y = labels[index];
      const bool violates = y * w.Dot(features[index]) < 1.0;
      w.Shrink(1.0 - eta * config.lambda);
      if (violates) w.AddScaled(features[index], eta * y);
    }
    // Average the end-of-epoch iterates over the second half of training.
    if (2 * (epoch + 1) > config.epochs) {
      const std::vector<double> snapshot = w.Materialize();
      for (std::size_t i = 0; i < snapshot.size(); ++i) average[i] += snapshot[i];
      ++averaged;
    }
  }

  SvmModel model;
  for (double& v : average) v /= static_cast<double>(averaged);
  model.weights = std::move(average);
  model.bias = model.weights.back();
  model.weights.pop_back();
  model.lambda = config.lambda;
  model.feature_mode = mode;
  model.dim = dim;
  return model;
}

double Score(const SvmModel& model, const FeatureVector& features) {
  if (features.dimension() != model.dim || model.weights.size() != model.dim) {
    throw std::invalid_argument("feature dimension " + std::to_string(features.dimension()) +
                                " does not match model dimension " + std::to_string(model.dim));
  }
  double sum = model.bias;
  for (const auto& [index, value] : features.entries()) sum += model.weights[index] * value;
  return sum;
}

double Accuracy(const SvmModel& model, std::span<const FeatureVector> features,
                std::span<const int> labels) {
  if (features.size() != labels.size()) {
    throw std::invalid_argument("feature and label counts differ");
  }
  if (features.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const int predicted = Score(model, features[i]) > 0.0 ? 1 : -1;
    if (predicted == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

EngagementEvaluation EvaluateEngagement(std::span<const EngagementExample> train,
                                        std::span<const EngagementExample> test,
                                        FeatureMode mode, const SvmConfig& config) {
  const LabeledFeatures train_data = PrepareTrainingData(train, mode);
  const LabeledFeatures test_data = PrepareTrainingData(test, mode);
  EngagementEvaluation eval;
  eval.model = TrainSvm(train_data.features, train_data.labels, config, mode);
  eval.train_accuracy = Accuracy(eval.model, train_data.features, train_data.labels);
  eval.test_accuracy = Accuracy(eval.model, test_data.features, test_data.labels);
  eval.train_size = train_data.labels.size();
  eval.test_size = test_data.labels.size();
  return eval;
}

std::string SerializeSvm(const SvmModel& model) {
  Json doc = {{"format", "parley-svm"},
              {"feature_mode", FeatureModeName(model.feature_mode)},
              {"dim", model.dim},
              {"lambda", model.lambda},
              {"bias", model.bias},
              {"weights", model.weights}};
  return doc.dump() + "\n";
}

SvmModel ParseSvm(std::string_view text) {
  const Json doc = Json::parse(text);
  if (doc.value("format", "") != "parley-svm") throw std::invalid_argument("not an svm model");
  SvmModel model;
  const auto mode = ParseFeatureMode(doc.at("feature_mode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown feature mode");
  model.feature_mode = *mode;
  model.dim = doc.at("dim").get<std::size_t>();
  model.lambda = doc.at("lambda").get<double>();
  model.bias = doc.at("bias").get<double>();
  model.weights = doc.at("weights").get<std::vector<double>>();
  if (model.weights.size() != model.dim) {
    throw std::invalid_argument("svm weight count does not match dim");
  }
  if (!std::isfinite(model.bias)) throw std::invalid_argument("non-finite svm bias");
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("non-finite svm weight");
  }
  return model;
}

void SaveSvm(const SvmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << SerializeSvm(model);
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

SvmModel LoadSvm(const std::filesystem::path& path) { return ParseSvm(ReadFile(path)); }

}  // namespace parley
