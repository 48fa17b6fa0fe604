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

#ifndef PARLEY_INTENT_H_
#define PARLEY_INTENT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parley {

struct IntentDef {
  std::string id;
  std::vector<std::string> examples;
  std::string description;
  std::string strategy = "template";
  std::vector<std::string> templates;
  std::string followup_question;
};

struct IntentMatch {
  std::string intent_id;
  double score = 0.0;
};

inline constexpr double kDefaultIntentThreshold = 0.6;

// Best intent by max Jaccard similarity between the token set of `text` and
// each example's token set. Equal scores resolve to the smallest intent id.
std::optional<IntentMatch> MatchIntent(std::string_view text,
                                       std::span<const IntentDef> intents,
                                       double threshold = kDefaultIntentThreshold);

// Intents file: JSON array of {id, examples, description, strategy,
// templates, followup_question}. Validates nonempty examples and templates.
std::vector<IntentDef> LoadIntents(const std::filesystem::path& path);
std::vector<IntentDef> ParseIntents(std::string_view json_text);

}  // namespace parley

#endif  // PARLEY_INTENT_H_
