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

#ifndef PARLEY_TOPIC_FOREST_H_
#define PARLEY_TOPIC_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parley/session.h"
#include "parley/topics.h"

namespace parley {

// Probability for each of the six topics, indexed by Topic.
struct TopicDistribution {
  TopicVector probabilities{};

  double operator[](Topic topic) const {
    return probabilities[static_cast<std::size_t>(topic)];
  }
  // Highest-probability topic; ties go to the earlier topic in enum order.
  Topic Argmax() const;

  static TopicDistribution Uniform();
  static TopicDistribution OneHot(Topic topic);

  bool operator==(const TopicDistribution&) const = default;
};

struct ForestConfig {
  std::size_t n_trees = 20;
  std::size_t max_depth = 12;
  std::size_t min_leaf = 2;
  // Hashed bag-of-words dimension; the model sees feature_dim + 6 inputs
  // (the trailing six are the prior topic probabilities).
  std::size_t feature_dim = 1024;
  std::uint64_t seed = 42;

  bool operator==(const ForestConfig&) const = default;
};

struct TreeNode {
  // -1 marks a leaf.
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  TopicVector distribution{};

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

// Binary tree stored as a flat node array with the root at index 0. Samples
// with x[feature] <= threshold go left.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  const TopicVector& Predict(std::span<const double> features) const;
  bool operator==(const DecisionTree&) const = default;
};

struct TopicModel {
  ForestConfig config;
  std::vector<DecisionTree> trees;

  std::size_t input_dim() const { return config.feature_dim + kNumTopics; }
  bool operator==(const TopicModel&) const = default;
};

struct LabeledText {
  Topic topic = Topic::kGeneral;
  std::string text;
};

// Random forest: each tree is grown on a bootstrap resample, choosing splits
// by Gini impurity among sqrt(input_dim) randomly drawn non-constant
// features. Throws std::invalid_argument on an empty corpus.
TopicModel TrainTopicForest(std::span<const LabeledText> corpus,
                            const ForestConfig& config);

// Dense input row: hashed bag of words followed by the prior (zeros if absent).
std::vector<double> TopicFeatures(std::string_view text, std::size_t feature_dim,
                                  const std::optional<TopicDistribution>& prior);

// Mean of the leaf distributions reached in each tree. The sum runs over the
// leaves in sorted order so the result does not depend on tree order.
TopicDistribution ClassifyTopic(const TopicModel& model, std::string_view text,
                                const std::optional<TopicDistribution>& prior = std::nullopt);
TopicDistribution PredictFeatures(const TopicModel& model, std::span<const double> features);

std::string SerializeTopicModel(const TopicModel& model);
TopicModel ParseTopicModel(std::string_view text);
void SaveTopicModel(const TopicModel& model, const std::filesystem::path& path);
TopicModel LoadTopicModel(const std::filesystem::path& path);

// One "<Topic>\t<text>" record per line.
std::vector<LabeledText> LoadLabeledCorpus(const std::filesystem::path& path);

// Six classes with disjoint 20-word vocabularies; each document draws
// `doc_length` words uniformly from its class vocabulary.
std::vector<LabeledText> SyntheticTopicCorpus(std::size_t docs_per_class,
                                              std::size_t doc_length,
                                              std::uint64_t seed);
// The 20-word vocabulary used for a topic by SyntheticTopicCorpus.
std::vector<std::string> SyntheticTopicVocabulary(Topic topic);

}  // namespace parley

#endif  // PARLEY_TOPIC_FOREST_H_
