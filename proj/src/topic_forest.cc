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
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "parley/prng.h"
#include "parley/text.h"

namespace parley {

namespace {

using Json = nlohmann::json;

// Dense training matrix, one row per document.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<std::size_t> labels;

  double at(std::size_t row, std::size_t col) const { return values[row * dim + col]; }
};

double Gini(const TopicVector& counts, double total) {
  if (total <= 0.0) return 0.0;
  double sum_sq = 0.0;
  for (double c : counts) sum_sq += (c / total) * (c / total);
  return 1.0 - sum_sq;
}

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const ForestConfig& config, std::uint64_t seed)
      : data_(data), config_(config), rng_(seed) {
    const auto dim = static_cast<double>(data_.dim);
    features_per_node_ = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(dim))));
  }

  DecisionTree Build(std::vector<std::size_t> rows) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    Grow(tree, 0, std::move(rows), 0);
    return tree;
  }

 private:
  void Grow(DecisionTree& tree, std::size_t node_index, std::vector<std::size_t> rows,
            std::size_t depth) {
    TopicVector counts{};
    for (std::size_t row : rows) counts[data_.labels[row]] += 1.0;
    const double total = static_cast<double>(rows.size());
    const double impurity = Gini(counts, total);

    const bool stop = depth >= config_.max_depth || impurity <= 0.0 ||
                      rows.size() < 2 * config_.min_leaf;
    std::optional<Split> split;
    if (!stop) split = FindSplit(rows, impurity);

    if (!split) {
      TreeNode& leaf = tree.nodes[node_index];
      for (std::size_t k = 0; k < kNumTopics; ++k) leaf.distribution[k] = counts[k] / total;
      return;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t row : rows) {
      if (data_.at(row, static_cast<std::size_t>(split->feature)) <= split->threshold) {
        left_rows.push_back(row);
      } else {
        right_rows.push_back(row);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const auto right = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
      TreeNode& node = tree.nodes[node_index];
      node.feature = split->feature;
      node.threshold = split->threshold;
      node.left = left;
      node.right = right;
    }
    Grow(tree, static_cast<std::size_t>(left), std::move(left_rows), depth + 1);
    Grow(tree, static_cast<std::size_t>(right), std::move(right_rows), depth + 1);
  }

  // Draws features without replacement until features_per_node_ of them vary
  // within the node (or all are exhausted), and returns the best split among
  // those that leaves at least min_leaf samples on each side.
  std::optional<Split> FindSplit(const std::vector<std::size_t>& rows, double parent_impurity) {
    std::vector<std::size_t> pool(data_.dim);
    std::iota(pool.begin(), pool.end(), 0);
    std::size_t remaining = pool.size();
    std::size_t evaluated = 0;

    std::optional<Split> best;
    std::vector<std::pair<double, std::size_t>> column(rows.size());
    while (evaluated < features_per_node_ && remaining > 0) {
      const std::size_t pick = rng_.UniformIndex(remaining);
      const std::size_t feature = pool[pick];
      std::swap(pool[pick], pool[remaining - 1]);
      --remaining;

      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {data_.at(rows[i], feature), data_.labels[rows[i]]};
      }
      const auto [lo, hi] = std::minmax_element(
          column.begin(), column.end(),
          [](const auto& a, const auto& b) { return a.first < b.first; });
      if (lo->first == hi->first) continue;
      ++evaluated;

      std::sort(column.begin(), column.end());
      TopicVector left{};
      TopicVector right{};
      for (const auto& [value, label] : column) right[label] += 1.0;
      const double n = static_cast<double>(column.size());
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left[column[i].second] += 1.0;
        right[column[i].second] -= 1.0;
        if (column[i].first == column[i + 1].first) continue;
        const double n_left = static_cast<double>(i + 1);
        const double n_right = n - n_left;
        if (n_left < static_cast<double>(config_.min_leaf) ||
            n_right < static_cast<double>(config_.min_leaf)) {
          continue;
        }
        const double weighted =
            (n_left * Gini(left, n_left) + n_right * Gini(right, n_right)) / n;
        if (!best || weighted < best->impurity) {
          best = Split{static_cast<std::int32_t>(feature),
                       0.5 * (column[i].first + column[i + 1].first), weighted};
        }
      }
    }
    if (best && best->impurity < parent_impurity - 1e-12) return best;
    return std::nullopt;
  }

  const Dataset& data_;
  const ForestConfig& config_;
  Lcg64 rng_;
  std::size_t features_per_node_ = 1;
};

Json NodeToJson(const TreeNode& node) {
  if (node.is_leaf()) return Json{{"leaf", node.distribution}};
  return Json{{"feature", node.feature},
              {"threshold", node.threshold},
              {"left", node.left},
              {"right", node.right}};
}

TreeNode NodeFromJson(const Json& json) {
  TreeNode node;
  if (json.contains("leaf")) {
    node.distribution = json.at("leaf").get<TopicVector>();
    return node;
  }
  node.feature = json.at("feature").get<std::int32_t>();
  node.threshold = json.at("threshold").get<double>();
  node.left = json.at("left").get<std::int32_t>();
  node.right = json.at("right").get<std::int32_t>();
  return node;
}

}  // namespace

Topic TopicDistribution::Argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumTopics; ++i) {
    if (probabilities[i] > probabilities[best]) best = i;
  }
  return static_cast<Topic>(best);
}

TopicDistribution TopicDistribution::Uniform() {
  TopicDistribution d;
  d.probabilities.fill(1.0 / static_cast<double>(kNumTopics));
  return d;
}

TopicDistribution TopicDistribution::OneHot(Topic topic) {
  TopicDistribution d;
  d.probabilities[static_cast<std::size_t>(topic)] = 1.0;
  return d;
}

const TopicVector& DecisionTree::Predict(std::span<const double> features) const {
  std::size_t index = 0;
  while (!nodes[index].is_leaf()) {
    const TreeNode& node = nodes[index];
    index = static_cast<std::size_t>(
        features[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                           : node.right);
  }
  return nodes[index].distribution;
}

TopicModel TrainTopicForest(std::span<const LabeledText> corpus, const ForestConfig& config) {
  if (corpus.empty()) throw std::invalid_argument("topic corpus is empty");
  if (config.n_trees == 0 || config.min_leaf == 0) {
    throw std::invalid_argument("forest needs n_trees >= 1 and min_leaf >= 1");
  }

  TopicModel model;
  model.config = config;

  Dataset data;
  data.dim = model.input_dim();
  data.values.reserve(corpus.size() * data.dim);
  for (const LabeledText& doc : corpus) {
    std::vector<double> row = TopicFeatures(doc.text, config.feature_dim, std::nullopt);
    data.values.insert(data.values.end(), row.begin(), row.end());
    data.labels.push_back(static_cast<std::size_t>(doc.topic));
  }

  const std::size_t n = corpus.size();
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Lcg64 bootstrap_rng(MixSeed(config.seed, 2 * t));
    std::vector<std::size_t> rows(n);
    for (std::size_t& row : rows) row = bootstrap_rng.UniformIndex(n);
    TreeBuilder builder(data, config, MixSeed(config.seed, 2 * t + 1));
    model.trees.push_back(builder.Build(std::move(rows)));
  }
  return model;
}

std::vector<double> TopicFeatures(std::string_view text, std::size_t feature_dim,
                                  const std::optional<TopicDistribution>& prior) {
  std::vector<double> row(feature_dim + kNumTopics, 0.0);
  const FeatureVector hashed = HashFeatures(Tokenize(text), feature_dim);
  for (const auto& [index, value] : hashed.entries()) row[index] = value;
  if (prior) {
    for (std::size_t k = 0; k < kNumTopics; ++k) row[feature_dim + k] = prior->probabilities[k];
  }
  return row;
}

TopicDistribution PredictFeatures(const TopicModel& model, std::span<const double> features) {
  if (features.size() != model.input_dim()) {
    throw std::invalid_argument("topic feature row has wrong dimension");
  }
  if (model.trees.empty()) throw std::invalid_argument("topic model has no trees");
  std::vector<TopicVector> leaves;
  leaves.reserve(model.trees.size());
  for (const DecisionTree& tree : model.trees) leaves.push_back(tree.Predict(features));
  std::sort(leaves.begin(), leaves.end());

  TopicDistribution out;
  for (const TopicVector& leaf : leaves) {
    for (std::size_t k = 0; k < kNumTopics; ++k) out.probabilities[k] += leaf[k];
  }
  const double count = static_cast<double>(leaves.size());
  for (double& p : out.probabilities) p /= count;
  return out;
}

TopicDistribution ClassifyTopic(const TopicModel& model, std::string_view text,
                                const std::optional<TopicDistribution>& prior) {
  return PredictFeatures(model, TopicFeatures(text, model.config.feature_dim, prior));
}

std::string SerializeTopicModel(const TopicModel& model) {
  Json trees = Json::array();
  for (const DecisionTree& tree : model.trees) {
    Json nodes = Json::array();
    for (const TreeNode& node : tree.nodes) nodes.push_back(NodeToJson(node));
    trees.push_back(Json{{"nodes", std::move(nodes)}});
  }
  std::vector<std::string> topics(kTopicNames.begin(), kTopicNames.end());
  Json doc{{"format", "parley-topic-forest"},
           {"version", 1},
           {"topics", topics},
           {"config",
            {{"n_trees", model.config.n_trees},
             {"max_depth", model.config.max_depth},
             {"min_leaf", model.config.min_leaf},
             {"feature_dim", model.config.feature_dim},
             {"seed", model.config.seed}}},
           {"trees", std::move(trees)}};
  return doc.dump();
}

TopicModel ParseTopicModel(std::string_view text) {
  const Json doc = Json::parse(text);
  if (doc.value("format", std::string()) != "parley-topic-forest") {
    throw std::invalid_argument("not a topic forest model");
  }
  TopicModel model;
  const Json& config = doc.at("config");
  model.config.n_trees = config.at("n_trees").get<std::size_t>();
  model.config.max_depth = config.at("max_depth").get<std::size_t>();
  model.config.min_leaf = config.at("min_leaf").get<std::size_t>();
  model.config.feature_dim = config.at("feature_dim").get<std::size_t>();
  model.config.seed = config.at("seed").get<std::uint64_t>();
  for (const Json& tree_json : doc.at("trees")) {
    DecisionTree tree;
    for (const Json& node : tree_json.at("nodes")) tree.nodes.push_back(NodeFromJson(node));
    model.trees.push_back(std::move(tree));
  }
  if (model.trees.size() != model.config.n_trees) {
    throw std::invalid_argument("topic model tree count does not match config");
  }
  return model;
}

void SaveTopicModel(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << SerializeTopicModel(model) << '\n';
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

TopicModel LoadTopicModel(const std::filesystem::path& path) {
  return ParseTopicModel(ReadFile(path));
}

std::vector<LabeledText> LoadLabeledCorpus(const std::filesystem::path& path) {
  std::vector<LabeledText> corpus;
  for (const std::string& line : ReadLines(path)) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("missing tab in: " + line);
    auto topic = ParseTopic(Trim(line.substr(0, tab)));
    if (!topic) throw std::invalid_argument("unknown topic in: " + line);
    corpus.push_back(LabeledText{*topic, line.substr(tab + 1)});
  }
  return corpus;
}

std::vector<std::string> SyntheticTopicVocabulary(Topic topic) {
  static const std::array<std::vector<std::string>, kNumTopics> kVocabulary = {{
      {"senate", "election", "vote", "congress", "president", "policy", "democrat",
       "republican", "campaign", "ballot", "governor", "senator", "legislation",
       "parliament", "minister", "diplomacy", "treaty", "candidate", "caucus", "referendum"},
      {"family", "cooking", "garden", "recipe", "breakfast", "weekend", "holiday",
       "parenting", "kitchen", "wedding", "birthday", "neighbor", "apartment", "laundry",
       "grocery", "dinner", "vacation", "pet", "hobby", "morning"},
      {"football", "soccer", "basketball", "goal", "team", "coach", "league", "tournament",
       "stadium", "playoff", "quarterback", "pitcher", "referee", "championship", "score",
       "athlete", "marathon", "tennis", "hockey", "baseball"},
      {"movie", "actor", "actress", "film", "concert", "album", "singer", "celebrity",
       "television", "episode", "premiere", "hollywood", "comedy", "drama", "theater",
       "musician", "festival", "oscar", "director", "soundtrack"},
      {"computer", "software", "smartphone", "internet", "robot", "algorithm", "laptop",
       "processor", "startup", "programming", "database", "network", "gadget", "app",
       "cloud", "server", "encryption", "browser", "silicon", "chip"},
      {"weather", "question", "today", "thing", "people", "idea", "world", "time", "place",
       "story", "reason", "answer", "opinion", "fact", "example", "moment", "problem",
       "news", "stuff", "word"},
  }};
  return kVocabulary[static_cast<std::size_t>(topic)];
}

std::vector<LabeledText> SyntheticTopicCorpus(std::size_t docs_per_class,
                                              std::size_t doc_length, std::uint64_t seed) {
  Lcg64 rng(seed);
  std::vector<LabeledText> corpus;
  for (std::size_t d = 0; d < docs_per_class; ++d) {
    for (std::size_t k = 0; k < kNumTopics; ++k) {
      const auto topic = static_cast<Topic>(k);
      const std::vector<std::string> vocabulary = SyntheticTopicVocabulary(topic);
      std::string text;
      for (std::size_t w = 0; w < doc_length; ++w) {
        if (w > 0) text.push_back(' ');
        text += vocabulary[rng.UniformIndex(vocabulary.size())];
      }
      corpus.push_back(LabeledText{topic, std::move(text)});
    }
  }
  return corpus;
}

}  // namespace parley
