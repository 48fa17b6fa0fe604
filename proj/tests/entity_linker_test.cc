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


#include "parley/entity_linker.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "parley/knowledge_base.h"
#include "parley/prng.h"
#include "test_util.h"

namespace parley {
namespace {

const KnowledgeBase& ShippedKb() {
  static const KnowledgeBase kb = LoadKnowledgeBase(testing::DataPath("kb.json"));
  return kb;
}

EntityRecord Record(std::string id, std::string label, std::vector<std::string> aliases) {
  return EntityRecord{std::move(id), std::move(label), "thing", std::move(aliases), {}};
}

TEST_CASE("rush hour links with full confidence") {
  const std::string text = "I think Rush Hour is the best action movie I've ever seen";
  const auto mentions = LinkEntities(text, ShippedKb());
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].kb_id == "rush_hour");
  CHECK(mentions[0].surface == "Rush Hour");
  CHECK(mentions[0].confidence == 1.0);
  CHECK(text.substr(mentions[0].start, mentions[0].end - mentions[0].start) == "Rush Hour");
}

TEST_CASE("gorsuch input yields two mentions") {
  const auto mentions =
      LinkEntities("How did Neil Gorsuch do in his confirmation hearings?", ShippedKb());
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].surface == "Neil Gorsuch");
  CHECK(mentions[0].kb_id == "neil_gorsuch");
  CHECK(mentions[1].surface == "confirmation");
  CHECK(mentions[1].kb_id == "advice_and_consent");
}

TEST_CASE("no alias means no mentions") {
  CHECK(LinkEntities("the weather is lovely today", ShippedKb()).empty());
  CHECK(LinkEntities("", ShippedKb()).empty());
}

TEST_CASE("ambiguous alias drops below threshold") {
  const KnowledgeBase kb({Record("a", "Mercury planet", {"Mercury"}),
                          Record("b", "Mercury element", {"Mercury"}),
                          Record("c", "Freddie Mercury", {"Mercury"})});
  CHECK(LinkEntities("I love Mercury", kb, 0.5).empty());
  const auto loose = LinkEntities("I love Mercury", kb, 0.3);
  REQUIRE(loose.size() == 1);
  CHECK(loose[0].confidence == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("longest alias wins and spans never overlap") {
  const KnowledgeBase kb({Record("ny", "New York", {"New York"}),
                          Record("nyc", "New York City", {"New York City"}),
                          Record("city", "City", {"City"}), Record("york", "York", {"York"})});
  const auto mentions = LinkEntities("New York City is bigger than York", kb);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].kb_id == "nyc");
  CHECK(mentions[1].kb_id == "york");

  Lcg64 rng(5);
  const std::vector<std::string> words = {"new", "york", "city", "is", "big", "New", "York"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (int w = 0; w < 8; ++w) text += words[rng.UniformIndex(words.size())] + " ";
    const auto found = LinkEntities(text, kb);
    for (std::size_t i = 0; i < found.size(); ++i) {
      CHECK(found[i].end > found[i].start);
      CHECK(kb.Find(found[i].kb_id) != nullptr);
      if (i > 0) CHECK(found[i].start >= found[i - 1].end);
    }
  }
}

TEST_CASE("label is always an alias") {
  const KnowledgeBase kb({Record("x", "Only Label", {})});
  const auto mentions = LinkEntities("only label here", kb);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].kb_id == "x");
}

TEST_CASE("knowledge base validation") {
  CHECK_THROWS_AS(KnowledgeBase({Record("a", "A", {}), Record("a", "B", {})}),
                  std::invalid_argument);
  const char* dangling =
      R"([{"id":"a","label":"A","type":"t","attributes":{"f":{"entity":"ghost"}}}])";
  CHECK_THROWS_AS(ParseKnowledgeBase(dangling), std::invalid_argument);
  const KnowledgeBase lax = ParseKnowledgeBase(dangling, false);
  CHECK(lax.DanglingReferences().size() == 1);
  CHECK_THROWS_AS(lax.ValueLabel(lax.At("a").attributes.at("f")), std::out_of_range);
  CHECK_THROWS_AS(lax.At("ghost"), std::out_of_range);
}

TEST_CASE("shipped knowledge base resolves references") {
  const KnowledgeBase& kb = ShippedKb();
  CHECK(kb.DanglingReferences().empty());
  CHECK(kb.ValueLabel(kb.At("rush_hour").attributes.at("cast member")) == "Jackie Chan");
  CHECK(kb.ValueLabel(kb.At("jackie_chan").attributes.at("occupation")) == "a martial artist");
}

TEST_CASE("templates must carry both slots") {
  CHECK_THROWS_AS(ParseTemplates(R"([{"master_type":"film","feature_type":"cast member",
                                      "text":"I saw [film]."}])"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParseTemplates(R"([{"master_type":"film","feature_type":"cast member",
                                      "text":"[film] [cast member] [year]"}])"),
                  std::invalid_argument);
  CHECK(ParseTemplates(R"([{"master_type":"film","feature_type":"cast member",
                            "text":"[film] stars [cast member]."}])")
            .size() == 1);
}

TEST_CASE("facts need a known subject") {
  CHECK_THROWS_AS(
      ParseFacts(R"([{"subject":"atlantis","relation":"capital","answer":"x"}])", ShippedKb()),
      std::invalid_argument);
}

}  // namespace
}  // namespace parley
