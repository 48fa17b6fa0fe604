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

#include "parley/intent.h"

#include <set>
#include <stdexcept>

#include "json.hpp"
#include "parley/text.h"

namespace parley {

std::optional<IntentMatch> MatchIntent(std::string_view text,
                                       std::span<const IntentDef> intents,
                                       double threshold) {
  const std::set<std::string> input = TokenSet(text);
  std::optional<IntentMatch> best;
  for (const IntentDef& intent : intents) {
    double score = 0.0;
    for (const std::string& example : intent.examples) {
      score = std::max(score, Jaccard(input, TokenSet(example)));
    }
    if (score < threshold) continue;
    if (!best || score > best->score ||
        (score == best->score && intent.id < best->intent_id)) {
      best = IntentMatch{intent.id, score};
    }
  }
  return best;
}

std::vector<IntentDef> ParseIntents(std::string_view json_text) {
  const nlohmann::json doc = nlohmann::json::parse(json_text);
  std::vector<IntentDef> intents;
  for (const auto& item : doc) {
    IntentDef def;
    def.id = item.at("id").get<std::string>();
    def.examples = item.at("examples").get<std::vector<std::string>>();
    def.description = item.value("description", std::string());
    def.strategy = item.value("strategy", std::string("template"));
    def.templates = item.at("templates").get<std::vector<std::string>>();
    def.followup_question = item.value("followup_question", std::string());
    if (def.examples.empty() || def.templates.empty()) {
      throw std::invalid_argument("intent '" + def.id +
                                  "' needs examples and templates");
    }
    if (def.strategy != "template") {
      throw std::invalid_argument("intent '" + def.id + "' has unsupported strategy " +
                                  def.strategy);
    }
    intents.push_back(std::move(def));
  }
  return intents;
}

std::vector<IntentDef> LoadIntents(const std::filesystem::path& path) {
  return ParseIntents(ReadFile(path));
}

}  // namespace parley
