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

#ifndef PARLEY_CONTEXT_H_
#define PARLEY_CONTEXT_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parley/entity_linker.h"
#include "parley/knowledge_base.h"
#include "parley/session.h"
#include "parley/topic_forest.h"

namespace parley {

inline constexpr std::size_t kContextTurns = 5;

inline constexpr std::array<std::string_view, 7> kResolvablePronouns = {
    "it", "he", "she", "they", "him", "her", "them"};

struct ContextWindow {
  // Oldest first, at most kContextTurns.
  std::vector<Turn> turns;
  // Entity mentions of each turn, aligned with `turns`.
  std::vector<std::vector<EntityMention>> mentions;
};

// Links entities in the last kContextTurns of `turns`.
ContextWindow BuildContextWindow(std::span<const Turn> turns, const KnowledgeBase& kb,
                                 double entity_threshold = kDefaultEntityThreshold);

// Replaces every resolvable pronoun (whole token, any case) with the label of
// the earliest mention in the window, ordered by turn_index and then by
// offset. A pronoun directly followed by an apostrophe, as in "it's", is left
// alone. Returns the text unchanged when there is nothing to substitute.
std::string ResolvePronouns(std::string_view text, const ContextWindow& window,
                            const KnowledgeBase& kb);

// Componentwise mean of the history (at most kContextTurns entries) and the
// current distribution. Throws std::invalid_argument for a longer history.
TopicDistribution SmoothTopics(std::span<const TopicDistribution> history,
                               const TopicDistribution& current);

}  // namespace parley

#endif  // PARLEY_CONTEXT_H_
