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

#include "parley/knowledge_base.h"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "parley/text.h"

namespace parley {

namespace {

using Json = nlohmann::json;

std::string SlotMarker(std::string_view name) { return "[" + std::string(name) + "]"; }

}  // namespace

KnowledgeBase::KnowledgeBase(std::vector<EntityRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    EntityRecord& record = records_[i];
    if (record.id.empty()) throw std::invalid_argument("entity with empty id");
    if (!by_id_.emplace(record.id, i).second) {
      throw std::invalid_argument("duplicate entity id " + record.id);
    }
    const std::string label = ToLower(record.label);
    const bool has_label = std::any_of(record.aliases.begin(), record.aliases.end(),
                                       [&](const std::string& a) { return ToLower(a) == label; });
    if (!has_label && !record.label.empty()) record.aliases.push_back(record.label);

    for (const std::string& alias : record.aliases) {
      AliasKey key = RawTokens(alias);
      if (key.empty()) continue;
      max_alias_tokens_ = std::max(max_alias_tokens_, key.size());
      std::vector<std::string>& ids = aliases_[std::move(key)];
      if (std::find(ids.begin(), ids.end(), record.id) == ids.end()) ids.push_back(record.id);
    }
  }
  for (auto& [key, ids] : aliases_) std::sort(ids.begin(), ids.end());
}

const EntityRecord* KnowledgeBase::Find(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

const EntityRecord& KnowledgeBase::At(std::string_view id) const {
  const EntityRecord* record = Find(id);
  if (record == nullptr) throw std::out_of_range("unknown entity " + std::string(id));
  return *record;
}

const std::vector<std::string>* KnowledgeBase::EntitiesForAlias(const AliasKey& tokens) const {
  auto it = aliases_.find(tokens);
  return it == aliases_.end() ? nullptr : &it->second;
}

std::string KnowledgeBase::ValueLabel(const AttributeValue& value) const {
  if (value.kind == AttributeValue::Kind::kLiteral) return value.value;
  const EntityRecord* target = Find(value.value);
  if (target == nullptr) {
    throw std::out_of_range("dangling entity reference " + value.value);
  }
  return target->label;
}

std::vector<std::string> KnowledgeBase::DanglingReferences() const {
  std::vector<std::string> problems;
  for (const EntityRecord& record : records_) {
    for (const auto& [feature, value] : record.attributes) {
      if (value.kind == AttributeValue::Kind::kEntity && Find(value.value) == nullptr) {
        problems.push_back(record.id + "." + feature + " -> " + value.value);
      }
    }
  }
  return problems;
}

KnowledgeBase ParseKnowledgeBase(std::string_view json_text, bool strict) {
  const Json doc = Json::parse(json_text);
  std::vector<EntityRecord> records;
  for (const Json& item : doc) {
    EntityRecord record;
    record.id = item.at("id").get<std::string>();
    record.label = item.at("label").get<std::string>();
    record.type = item.at("type").get<std::string>();
    record.aliases = item.value("aliases", std::vector<std::string>());
    if (item.contains("attributes")) {
      for (const auto& [feature, value] : item.at("attributes").items()) {
        if (value.contains("entity")) {
          record.attributes[feature] = AttributeValue::Entity(value["entity"].get<std::string>());
        } else if (value.contains("text")) {
          record.attributes[feature] = AttributeValue::Literal(value["text"].get<std::string>());
        } else {
          throw std::invalid_argument("attribute " + feature + " of " + record.id +
                                      " needs \"entity\" or \"text\"");
        }
      }
    }
    records.push_back(std::move(record));
  }
  KnowledgeBase kb(std::move(records));
  if (strict) {
    const auto dangling = kb.DanglingReferences();
    if (!dangling.empty()) throw std::invalid_argument("dangling reference: " + dangling.front());
  }
  return kb;
}

KnowledgeBase LoadKnowledgeBase(const std::filesystem::path& path, bool strict) {
  return ParseKnowledgeBase(ReadFile(path), strict);
}

std::vector<RelationTemplate> ParseTemplates(std::string_view json_text) {
  std::vector<RelationTemplate> templates;
  for (const Json& item : Json::parse(json_text)) {
    RelationTemplate t{item.at("master_type").get<std::string>(),
                       item.at("feature_type").get<std::string>(),
                       item.at("text").get<std::string>()};
    if (t.text.find(SlotMarker(t.master_type)) == std::string::npos ||
        t.text.find(SlotMarker(t.feature_type)) == std::string::npos) {
      throw std::invalid_argument("template lacks its slots: " + t.text);
    }
    std::string rest = t.text;
    for (const std::string& marker : {SlotMarker(t.master_type), SlotMarker(t.feature_type)}) {
      for (std::size_t pos; (pos = rest.find(marker)) != std::string::npos;) {
        rest.erase(pos, marker.size());
      }
    }
    const std::size_t open = rest.find('[');
    if (open != std::string::npos && rest.find(']', open) != std::string::npos) {
      throw std::invalid_argument("template has an unknown slot: " + t.text);
    }
    templates.push_back(std::move(t));
  }
  return templates;
}

std::vector<RelationTemplate> LoadTemplates(const std::filesystem::path& path) {
  return ParseTemplates(ReadFile(path));
}

std::vector<Fact> ParseFacts(std::string_view json_text, const KnowledgeBase& kb) {
  std::vector<Fact> facts;
  for (const Json& item : Json::parse(json_text)) {
    Fact fact{item.at("subject").get<std::string>(), item.at("relation").get<std::string>(),
              item.at("answer").get<std::string>()};
    if (kb.Find(fact.subject) == nullptr) {
      throw std::invalid_argument("fact subject not in knowledge base: " + fact.subject);
    }
    facts.push_back(std::move(fact));
  }
  return facts;
}

std::vector<Fact> LoadFacts(const std::filesystem::path& path, const KnowledgeBase& kb) {
  return ParseFacts(ReadFile(path), kb);
}

std::vector<BackstoryEntry> ParseBackstory(std::string_view json_text) {
  std::vector<BackstoryEntry> entries;
  for (const Json& item : Json::parse(json_text)) {
    BackstoryEntry entry{item.at("patterns").get<std::vector<std::string>>(),
                         item.at("replies").get<std::vector<std::string>>()};
    if (entry.pattern_examples.empty() || entry.replies.empty()) {
      throw std::invalid_argument("backstory entry needs patterns and replies");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<BackstoryEntry> LoadBackstory(const std::filesystem::path& path) {
  return ParseBackstory(ReadFile(path));
}

}  // namespace parley
