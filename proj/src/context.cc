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

#include "parley/context.h"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "parley/text.h"

namespace parley {

namespace {

bool IsPronoun(std::string_view token) {
  return std::find(kResolvablePronouns.begin(), kResolvablePronouns.end(), token) !=
         kResolvablePronouns.end();
}

std::optional<std::string> EarliestLabel(const ContextWindow& window, const KnowledgeBase& kb) {
  std::optional<std::tuple<std::size_t, std::size_t, std::string>> best;
  for (std::size_t t = 0; t < window.turns.size() && t < window.mentions.size(); ++t) {
    for (const EntityMention& mention : window.mentions[t]) {
      const EntityRecord* record = kb.Find(mention.kb_id);
      if (record == nullptr) continue;
      auto key = std::make_tuple(window.turns[t].turn_index, mention.start, record->label);
      if (!best || key < *best) best = std::move(key);
    }
  }
  if (!best) return std::nullopt;
  return std::get<2>(*best);
}

}  // namespace

ContextWindow BuildContextWindow(std::span<const Turn> turns, const KnowledgeBase& kb,
                                 double entity_threshold) {
  ContextWindow window;
  const std::size_t skip = turns.size() > kContextTurns ? turns.size() - kContextTurns : 0;
  for (const Turn& turn : turns.subspan(skip)) {
    window.turns.push_back(turn);
    window.mentions.push_back(LinkEntities(turn.text, kb, entity_threshold));
  }
  return window;
}

std::string ResolvePronouns(std::string_view text, const ContextWindow& window,
                            const KnowledgeBase& kb) {
  std::vector<TokenSpan> pronouns;
  for (TokenSpan& span : TokenizeWithSpans(text)) {
    if (!IsPronoun(span.text)) continue;
    const std::string_view rest = text.substr(span.end);
    if (rest.starts_with('\'') || rest.starts_with("\u2019")) continue;  // it's, it’s
    pronouns.push_back(std::move(span));
  }
  if (pronouns.empty()) return std::string(text);
  const std::optional<std::string> label = EarliestLabel(window, kb);
  if (!label) return std::string(text);

  std::string out;
  std::size_t cursor = 0;
  for (const TokenSpan& span : pronouns) {
    out.append(text.substr(cursor, span.begin - cursor));
    out += *label;
    cursor = span.end;
  }
  out.append(text.substr(cursor));
  return out;
}

TopicDistribution SmoothTopics(std::span<const TopicDistribution> history,
                               const TopicDistribution& current) {
  if (history.size() > kContextTurns) {
    throw std::invalid_argument("topic history longer than the context window");
  }
  TopicDistribution mean;
  const double count = static_cast<double>(history.size() + 1);
  for (std::size_t k = 0; k < kNumTopics; ++k) {
    double sum = current.probabilities[k];
    for (const TopicDistribution& past : history) sum += past.probabilities[k];
    mean.probabilities[k] = sum / count;
  }
  return mean;
}

}  // namespace parley
