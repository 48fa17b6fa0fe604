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

#include <algorithm>

#include "parley/text.h"

namespace parley {

namespace {

struct Match {
  std::size_t first_token = 0;
  std::size_t length = 0;
  EntityMention mention;
};

}  // namespace

std::vector<EntityMention> LinkEntities(std::string_view text, const KnowledgeBase& kb,
                                        double threshold) {
  const std::vector<TokenSpan> tokens = TokenizeWithSpans(text);
  std::vector<Match> matches;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    KnowledgeBase::AliasKey key;
    const std::size_t longest = std::min(kb.max_alias_tokens(), tokens.size() - i);
    for (std::size_t len = 1; len <= longest; ++len) {
      key.push_back(tokens[i + len - 1].text);
      const std::vector<std::string>* ids = kb.EntitiesForAlias(key);
      if (ids == nullptr || ids->empty()) continue;
      const double confidence = 1.0 / static_cast<double>(ids->size());
      if (confidence < threshold) continue;
      Match match;
      match.first_token = i;
      match.length = len;
      match.mention.start = tokens[i].begin;
      match.mention.end = tokens[i + len - 1].end;
      match.mention.surface =
          std::string(text.substr(match.mention.start, match.mention.end - match.mention.start));
      match.mention.kb_id = ids->front();
      match.mention.confidence = confidence;
      matches.push_back(std::move(match));
    }
  }

  std::stable_sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.first_token < b.first_token;
  });
  std::vector<bool> taken(tokens.size(), false);
  std::vector<Match> accepted;
  for (Match& match : matches) {
    const auto begin = taken.begin() + static_cast<std::ptrdiff_t>(match.first_token);
    const auto end = begin + static_cast<std::ptrdiff_t>(match.length);
    if (std::any_of(begin, end, [](bool t) { return t; })) continue;
    std::fill(begin, end, true);
    accepted.push_back(std::move(match));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Match& a, const Match& b) { return a.first_token < b.first_token; });

  std::vector<EntityMention> mentions;
  mentions.reserve(accepted.size());
  for (Match& match : accepted) mentions.push_back(std::move(match.mention));
  return mentions;
}

}  // namespace parley
