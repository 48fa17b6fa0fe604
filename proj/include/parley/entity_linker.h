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

#ifndef PARLEY_ENTITY_LINKER_H_
#define PARLEY_ENTITY_LINKER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "parley/knowledge_base.h"

namespace parley {

struct EntityMention {
  // Surface text exactly as it appears in the input.
  std::string surface;
  // Byte offsets into the input, end exclusive.
  std::size_t start = 0;
  std::size_t end = 0;
  std::string kb_id;
  double confidence = 0.0;

  bool operator==(const EntityMention&) const = default;
};

inline constexpr double kDefaultEntityThreshold = 0.5;

// Dictionary linker. Every token window that equals some KB alias is a
// candidate with confidence 1 / (number of entities sharing the alias);
// candidates under the threshold are discarded, then overlaps are resolved
// by accepting longer matches first and leftmost among equal lengths.
// Ambiguous aliases link to the smallest entity id. Output is in text order.
std::vector<EntityMention> LinkEntities(std::string_view text, const KnowledgeBase& kb,
                                        double threshold = kDefaultEntityThreshold);

}  // namespace parley

#endif  // PARLEY_ENTITY_LINKER_H_
