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

#ifndef PARLEY_KNOWLEDGE_BASE_H_
#define PARLEY_KNOWLEDGE_BASE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace parley {

// An attribute value is either a reference to another entity or literal text.
struct AttributeValue {
  enum class Kind { kEntity, kLiteral };
  Kind kind = Kind::kLiteral;
  std::string value;

  static AttributeValue Entity(std::string id) { return {Kind::kEntity, std::move(id)}; }
  static AttributeValue Literal(std::string text) { return {Kind::kLiteral, std::move(text)}; }
  bool operator==(const AttributeValue&) const = default;
};

struct EntityRecord {
  std::string id;
  std::string label;
  std::string type;
  std::vector<std::string> aliases;
  // Keyed by feature type, e.g. "cast member".
  std::map<std::string, AttributeValue> attributes;
};

// Entity records plus an alias index over their token sequences.
class KnowledgeBase {
 public:
  using AliasKey = std::vector<std::string>;

  KnowledgeBase() = default;
  // The label is always added as an alias. Throws std::invalid_argument on
  // duplicate ids. Entity references are not checked here; see Validate().
  explicit KnowledgeBase(std::vector<EntityRecord> records);

  const std::vector<EntityRecord>& records() const { return records_; }
  const EntityRecord* Find(std::string_view id) const;
  // Throws std::out_of_range for unknown ids.
  const EntityRecord& At(std::string_view id) const;

  // Entity ids (sorted) registered under an alias token sequence.
  const std::vector<std::string>* EntitiesForAlias(const AliasKey& tokens) const;
  std::size_t max_alias_tokens() const { return max_alias_tokens_; }

  // Label of a referenced entity, or the literal text. Throws
  // std::out_of_range for a dangling entity reference.
  std::string ValueLabel(const AttributeValue& value) const;

  // Descriptions of every dangling entity reference; empty when consistent.
  std::vector<std::string> DanglingReferences() const;

 private:
  std::vector<EntityRecord> records_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<AliasKey, std::vector<std::string>> aliases_;
  std::size_t max_alias_tokens_ = 0;
};

// [master_type] and [feature_type] are the slot markers in `text`.
struct RelationTemplate {
  std::string master_type;
  std::string feature_type;
  std::string text;
};

struct Fact {
  std::string subject;
  std::string relation;
  std::string answer;
};

struct BackstoryEntry {
  std::vector<std::string> pattern_examples;
  std::vector<std::string> replies;
};

// KB file: JSON array of {id, label, type, aliases, attributes}, where each
// attribute maps a feature type to {"entity": id} or {"text": literal}.
// With `strict`, dangling references are rejected.
KnowledgeBase ParseKnowledgeBase(std::string_view json_text, bool strict = true);
KnowledgeBase LoadKnowledgeBase(const std::filesystem::path& path, bool strict = true);

// Templates file: JSON array of {master_type, feature_type, text}. Each text
// must contain both slots.
std::vector<RelationTemplate> ParseTemplates(std::string_view json_text);
std::vector<RelationTemplate> LoadTemplates(const std::filesystem::path& path);

// Facts file: JSON array of {subject, relation, answer}; subjects must exist.
std::vector<Fact> ParseFacts(std::string_view json_text, const KnowledgeBase& kb);
std::vector<Fact> LoadFacts(const std::filesystem::path& path, const KnowledgeBase& kb);

// Backstory file: JSON array of {patterns, replies}, both nonempty.
std::vector<BackstoryEntry> ParseBackstory(std::string_view json_text);
std::vector<BackstoryEntry> LoadBackstory(const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_KNOWLEDGE_BASE_H_
