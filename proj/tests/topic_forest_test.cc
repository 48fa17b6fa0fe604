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


#include "parley/topic_forest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "parley/prng.h"
#include "test_util.h"

namespace parley {
namespace {

ForestConfig SmallConfig() {
  ForestConfig config;
  config.n_trees = 5;
  config.max_depth = 6;
  config.feature_dim = 256;
  return config;
}

double SumOf(const TopicVector& v) {
  double sum = 0.0;
  for (double p : v) sum += p;
  return sum;
}

const TopicModel& SyntheticModel() {
  static const TopicModel model =
      TrainTopicForest(SyntheticTopicCorpus(100, 8, 42), ForestConfig{});
  return model;
}

TEST_CASE("empty corpus is an error") {
  CHECK_THROWS_AS(TrainTopicForest({}, ForestConfig{}), std::invalid_argument);
}

TEST_CASE("single class corpus predicts that class with certainty") {
  const std::vector<LabeledText> corpus = {{Topic::kSports, "football goal"},
                                           {Topic::kSports, "tennis match"},
                                           {Topic::kSports, "hockey"}};
  const TopicModel model = TrainTopicForest(corpus, SmallConfig());
  for (const char* text : {"football", "quantum chromodynamics", ""}) {
    CHECK(ClassifyTopic(model, text)[Topic::kSports] == 1.0);
  }
}

TEST_CASE("forest shape invariants") {
  const TopicModel& model = SyntheticModel();
  CHECK(model.trees.size() == 20);
  for (const DecisionTree& tree : model.trees) {
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) {
        CHECK(SumOf(node.distribution) == doctest::Approx(1.0).epsilon(1e-12));
      } else {
        CHECK(node.feature < static_cast<std::int32_t>(model.input_dim()));
        CHECK(node.left > 0);
        CHECK(node.right > 0);
      }
    }
  }
}

TEST_CASE("synthetic holdout accuracy at least 0.90") {
  const TopicModel& model = SyntheticModel();
  const auto test = SyntheticTopicCorpus(20, 8, 4242);
  std::size_t correct = 0;
  for (const LabeledText& doc : test) correct += ClassifyTopic(model, doc.text).Argmax() == doc.topic;
  CHECK(static_cast<double>(correct) / static_cast<double>(test.size()) >= 0.90);
}

TEST_CASE("pure sports vocabulary classifies as sports") {
  const auto words = SyntheticTopicVocabulary(Topic::kSports);
  const std::string text = words[0] + " " + words[3] + " " + words[7] + " " + words[12];
  CHECK(ClassifyTopic(SyntheticModel(), text).Argmax() == Topic::kSports);
}

TEST_CASE("synthetic vocabularies are disjoint with twenty words each") {
  std::set<std::string> seen;
  for (std::size_t k = 0; k < kNumTopics; ++k) {
    const auto words = SyntheticTopicVocabulary(static_cast<Topic>(k));
    CHECK(words.size() == 20);
    for (const std::string& w : words) CHECK(seen.insert(w).second);
  }
}

TEST_CASE("prediction is a convex combination of leaves") {
  const TopicModel& model = SyntheticModel();
  Lcg64 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    std::string text;
    for (int w = 0; w < 6; ++w) {
      const auto words = SyntheticTopicVocabulary(static_cast<Topic>(rng.UniformIndex(kNumTopics)));
      text += words[rng.UniformIndex(words.size())] + " ";
    }
    const TopicDistribution d = ClassifyTopic(model, text, TopicDistribution::Uniform());
    for (double p : d.probabilities) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    CHECK(SumOf(d.probabilities) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("tree order does not change the prediction") {
  TopicModel model = SyntheticModel();
  const std::string text = "senate football movie software";
  const TopicDistribution before = ClassifyTopic(model, text);
  std::reverse(model.trees.begin(), model.trees.end());
  CHECK(ClassifyTopic(model, text) == before);
  std::rotate(model.trees.begin(), model.trees.begin() + 7, model.trees.end());
  CHECK(ClassifyTopic(model, text) == before);
}

TEST_CASE("training is bit-identical for a fixed seed") {
  const auto corpus = SyntheticTopicCorpus(10, 6, 3);
  const TopicModel a = TrainTopicForest(corpus, SmallConfig());
  const TopicModel b = TrainTopicForest(corpus, SmallConfig());
  CHECK(a == b);
  ForestConfig other = SmallConfig();
  other.seed = 7;
  CHECK_FALSE(TrainTopicForest(corpus, other) == a);
}

TEST_CASE("serialization round-trips") {
  const TopicModel model = TrainTopicForest(SyntheticTopicCorpus(10, 6, 3), SmallConfig());
  CHECK(ParseTopicModel(SerializeTopicModel(model)) == model);
  CHECK_THROWS(ParseTopicModel(R"({"format":"other"})"));
}

TEST_CASE("prior enters the feature row") {
  const auto row = TopicFeatures("football", 256, TopicDistribution::OneHot(Topic::kLife));
  REQUIRE(row.size() == 256 + kNumTopics);
  CHECK(row[256 + 1] == 1.0);
  CHECK(TopicFeatures("football", 256, std::nullopt)[256 + 1] == 0.0);
  CHECK_THROWS(PredictFeatures(SyntheticModel(), row));
}

TEST_CASE("shipped topic model loads and labels its corpus") {
  const TopicModel model = LoadTopicModel(testing::DataPath("topic_model.json"));
  const auto corpus = LoadLabeledCorpus(testing::DataPath("topic_corpus.tsv"));
  CHECK(model.trees.size() == 20);
  std::size_t correct = 0;
  for (const LabeledText& doc : corpus) correct += ClassifyTopic(model, doc.text).Argmax() == doc.topic;
  // Regression guard for the shipped model under the default depth and leaf limits.
  CHECK(static_cast<double>(correct) / static_cast<double>(corpus.size()) >= 0.80);
}

TEST_CASE("uniform argmax picks the first topic") {
  CHECK(TopicDistribution::Uniform().Argmax() == Topic::kPolitics);
}

}  // namespace
}  // namespace parley
