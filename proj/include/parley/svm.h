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

#ifndef PARLEY_SVM_H_
#define PARLEY_SVM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parley/engagement.h"
#include "parley/text.h"

namespace parley {

struct SvmConfig {
  double lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 1;
};

struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1e-4;
  FeatureMode feature_mode = FeatureMode::kFull;
  std::size_t dim = 0;
  bool operator==(const SvmModel&) const = default;
};

// Pegasos: stochastic subgradient descent on the L2-regularized hinge loss
// with step size 1 / (lambda * t), visiting the examples in a freshly
// shuffled order each epoch. The bias is learned as the weight of a constant
// input of 1 and is regularized with the other weights. Labels are +1/-1.
// Throws std::invalid_argument unless both classes are present and all
// vectors share one dimension.
SvmModel TrainSvm(std::span<const FeatureVector> features, std::span<const int> labels,
                  const SvmConfig& config, FeatureMode mode);

// weights . features + bias. Throws std::invalid_argument on a dimension
// mismatch.
double Score(const SvmModel& model, const FeatureVector& features);

// Share of examples whose margin sign matches the label (margin 0 counts as
// negative).
double Accuracy(const SvmModel& model, std::span<const FeatureVector> features,
                std::span<const int> labels);

struct EngagementEvaluation {
  SvmModel model;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

// Trains on the labeled part of `train` and measures accuracy on the labeled
// part of `test`, using only the features of `mode`.
EngagementEvaluation EvaluateEngagement(std::span<const EngagementExample> train,
                                        std::span<const EngagementExample> test,
                                        FeatureMode mode, const SvmConfig& config);

// JSON: {"format":"parley-svm","feature_mode","dim","lambda","bias","weights"}.
std::string SerializeSvm(const SvmModel& model);
SvmModel ParseSvm(std::string_view text);
void SaveSvm(const SvmModel& model, const std::filesystem::path& path);
SvmModel LoadSvm(const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_SVM_H_
