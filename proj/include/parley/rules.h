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

#ifndef PARLEY_RULES_H_
#define PARLEY_RULES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "parley/entity_linker.h"
#include "parley/intent.h"
#include "parley/knowledge_base.h"
#include "parley/session.h"

namespace parley {

inline constexpr double kDefaultBackstoryThreshold = 0.7;

// Seeded uniform choice among the intent's templates, followed by a space and
// the intent's follow-up question. Throws std::invalid_argument if the match
// does not name this intent.
Candidate IntentReply(const IntentMatch& match, const IntentDef& def, std::uint64_t seed);

// Persona reply from the entry whose patterns best match `text` (max Jaccard
// over token sets); nullopt if the best score is under the threshold.
std::optional<Candidate> BackstoryReply(std::string_view text,
                                        std::span<const BackstoryEntry> entries,
                                        double threshold, std::uint64_t seed);

// Replaces every [master_type] slot with `master_label` and every
// [feature_type] slot with `feature_label`.
std::string FillTemplate(const RelationTemplate& relation_template,
                         std::string_view master_label, std::string_view feature_label);

// Fills every template whose (master_type, feature_type) matches a mentioned
// entity's (type, attribute) and picks one uniformly. Throws
// std::out_of_range on a dangling entity reference.
std::optional<Candidate> EntityTemplateReply(std::span<const EntityMention> mentions,
                                             const KnowledgeBase& kb,
                                             std::span<const RelationTemplate> templates,
                                             std::uint64_t seed);

// True if the text ends in '?' or opens with an interrogative or auxiliary.
bool IsQuestion(std::string_view text);

// Answers a question from the fact store: the first fact whose subject is
// linked in the text and whose relation tokens all occur in it.
std::optional<Candidate> QaAnswer(std::string_view text, const KnowledgeBase& kb,
                                  std::span<const Fact> facts,
                                  double entity_threshold = kDefaultEntityThreshold);

}  // namespace parley

#endif  // PARLEY_RULES_H_
