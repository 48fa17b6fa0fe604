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


#include "parley/neural_reply.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

namespace parley {
namespace {

// A model that emits `symbol` at every step regardless of input.
Seq2SeqModel Parrot(char symbol) {
  Seq2SeqConfig config;
  config.layers = 1;
  config.hidden = 2;
  const std::vector<std::string> texts = {"gps"};
  config.vocab = BuildVocab(texts, SymbolMode::kChar);
  Seq2SeqModel model = InitModel(config);
  model.params.output_bias.setZero();
  model.params.output_bias(static_cast<Eigen::Index>(model.SymbolId(std::string(1, symbol)))) = 100.0;
  return model;
}

TopicDistribution Peaked(Topic topic) {
  TopicDistribution d = TopicDistribution::Uniform();
  d.probabilities.fill(0.1);
  d.probabilities[static_cast<std::size_t>(topic)] = 0.5;
  return d;
}

TEST_CASE("topic model selection with general fallback") {
  TopicModels models;
  models.emplace(Topic::kGeneral, Parrot('g'));
  models.emplace(Topic::kPolitics, Parrot('p'));
  models.emplace(Topic::kSports, Parrot('s'));

  const auto sports = NeuralReply(models, Peaked(Topic::kSports), "hi", 1, 3);
  REQUIRE(sports.size() == 3);
  for (const Candidate& c : sports) {
    CHECK(c.text == "sss");
    CHECK(c.generator == Generator::kNeural);
    CHECK(c.priority_tier == 3);
  }

  const auto life = NeuralReply(models, Peaked(Topic::kLife), "hi", 1, 3);
  REQUIRE(life.size() == 3);
  CHECK(life[0].text == "ggg");

  const auto uniform = NeuralReply(models, TopicDistribution::Uniform(), "hi", 1, 3);
  REQUIRE_FALSE(uniform.empty());
  CHECK(uniform[0].text == "ppp");
}

TEST_CASE("missing general model is an error") {
  TopicModels models;
  models.emplace(Topic::kSports, Parrot('s'));
  CHECK_THROWS_AS(NeuralReply(models, Peaked(Topic::kLife), "hi", 1, 3), std::invalid_argument);
}

TEST_CASE("at most three nonempty candidates") {
  TopicModels models;
  Seq2SeqModel silent = Parrot('g');
  silent.params.output_bias(static_cast<Eigen::Index>(silent.end_id())) = 1000.0;
  models.emplace(Topic::kGeneral, silent);
  CHECK(NeuralReply(models, TopicDistribution::Uniform(), "hi", 1, 3).empty());

  TopicModels random;
  random.emplace(Topic::kGeneral, InitModel([] {
                   Seq2SeqConfig c;
                   c.layers = 1;
                   c.hidden = 4;
                   const std::vector<std::string> texts = {"abc"};
                   c.vocab = BuildVocab(texts, SymbolMode::kChar);
                   return c;
                 }()));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto out = NeuralReply(random, TopicDistribution::Uniform(), "abc", seed, 8);
    CHECK(out.size() <= 3);
    for (const Candidate& c : out) CHECK_FALSE(c.text.empty());
    CHECK(NeuralReply(random, TopicDistribution::Uniform(), "abc", seed, 8) == out);
  }
}

}  // namespace
}  // namespace parley
