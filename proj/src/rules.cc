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

#include "parley/rules.h"

#include <array>
#include <set>
#include <stdexcept>
#include <vector>

#include "parley/prng.h"
#include "parley/text.h"

namespace parley {

namespace {

constexpr std::array<std::string_view, 15> kQuestionOpeners = {
    "who", "what", "when", "where", "why", "how", "is", "are",
    "do",  "does", "did",  "can",   "could", "would", "will"};

void ReplaceAll(std::string& text, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

Candidate IntentReply(const IntentMatch& match, const IntentDef& def, std::uint64_t seed) {
  if (match.intent_id != def.id) {
    throw std::invalid_argument("intent match " + match.intent_id + " does not name " + def.id);
  }
  if (def.templates.empty()) throw std::invalid_argument("intent " + def.id + " has no templates");
  Lcg64 rng(seed);
  std::string text = def.templates[rng.UniformIndex(def.templates.size())];
  if (!def.followup_question.empty()) {
    text += " ";
    text += def.followup_question;
  }
  return Candidate::Make(std::move(text), Generator::kIntent, "intent:" + def.id);
}

std::optional<Candidate> BackstoryReply(std::string_view text,
                                        std::span<const BackstoryEntry> entries,
                                        double threshold, std::uint64_t seed) {
  const std::set<std::string> input = TokenSet(text);
  if (input.empty()) return std::nullopt;
  double best_score = -1.0;
  std::size_t best_entry = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const std::string& pattern : entries[i].pattern_examples) {
      const double score = Jaccard(input, TokenSet(pattern));
      if (score > best_score) {
        best_score = score;
        best_entry = i;
      }
    }
  }
  if (best_score < threshold) return std::nullopt;
  const BackstoryEntry& entry = entries[best_entry];
  Lcg64 rng(seed);
  return Candidate::Make(entry.replies[rng.UniformIndex(entry.replies.size())],
                         Generator::kBackstory, "backstory:" + std::to_string(best_entry));
}

std::string FillTemplate(const RelationTemplate& relation_template,
                         std::string_view master_label, std::string_view feature_label) {
  std::string text = relation_template.text;
  ReplaceAll(text, "[" + relation_template.master_type + "]", master_label);
  ReplaceAll(text, "[" + relation_template.feature_type + "]", feature_label);
  return text;
}

std::optional<Candidate> EntityTemplateReply(std::span<const EntityMention> mentions,
                                             const KnowledgeBase& kb,
                                             std::span<const RelationTemplate> templates,
                                             std::uint64_t seed) {
  std::vector<Candidate> filled;
  for (const EntityMention& mention : mentions) {
    const EntityRecord& record = kb.At(mention.kb_id);
    for (const auto& [feature, value] : record.attributes) {
      for (std::size_t t = 0; t < templates.size(); ++t) {
        const RelationTemplate& relation_template = templates[t];
        if (relation_template.master_type != record.type ||
            relation_template.feature_type != feature) {
          continue;
        }
        filled.push_back(Candidate::Make(
            FillTemplate(relation_template, record.label, kb.ValueLabel(value)),
            Generator::kEntityTemplate,
            "template:" + std::to_string(t) + ":" + record.id));
      }
    }
  }
  if (filled.empty()) return std::nullopt;
  Lcg64 rng(seed);
  return filled[rng.UniformIndex(filled.size())];
}

bool IsQuestion(std::string_view text) {
  const std::string trimmed = Trim(text);
  if (!trimmed.empty() && trimmed.back() == '?') return true;
  const std::vector<std::string> tokens = RawTokens(trimmed);
  if (tokens.empty()) return false;
  for (std::string_view opener : kQuestionOpeners) {
    if (tokens.front() == opener) return true;
  }
  return false;
}

std::optional<Candidate> QaAnswer(std::string_view text, const KnowledgeBase& kb,
                                  std::span<const Fact> facts, double entity_threshold) {
  if (!IsQuestion(text)) return std::nullopt;
  const std::vector<EntityMention> mentions = LinkEntities(text, kb, entity_threshold);
  if (mentions.empty()) return std::nullopt;
  std::set<std::string> linked;
  for (const EntityMention& mention : mentions) linked.insert(mention.kb_id);
  const std::vector<std::string> raw = RawTokens(text);
  const std::set<std::string> text_tokens(raw.begin(), raw.end());

  for (std::size_t i = 0; i < facts.size(); ++i) {
    const Fact& fact = facts[i];
    if (linked.count(fact.subject) == 0) continue;
    const std::vector<std::string> relation = RawTokens(fact.relation);
    bool all_present = !relation.empty();
    for (const std::string& token : relation) all_present = all_present && text_tokens.count(token) > 0;
    if (!all_present) continue;
    std::string answer = Trim(fact.answer);
    if (answer.empty()) continue;
    const char last = answer.back();
    if (last != '.' && last != '!' && last != '?') answer.push_back('.');
    return Candidate::Make(std::move(answer), Generator::kQa, "fact:" + std::to_string(i));
  }
  return std::nullopt;
}

}  // namespace parley
