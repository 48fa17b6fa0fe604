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

#include "parley/reply_selection.h"

#include <algorithm>
#include <tuple>

#include "parley/engagement.h"
#include "parley/text.h"

namespace parley {

namespace {

// Code point count, or nullopt for malformed UTF-8 or control characters.
std::optional<std::size_t> PrintableLength(std::string_view text) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t width = 0;
    if (lead < 0x80) {
      if (lead < 0x20 || lead == 0x7F) return std::nullopt;
      width = 1;
    } else if ((lead & 0xE0) == 0xC0) {
      width = 2;
    } else if ((lead & 0xF0) == 0xE0) {
      width = 3;
    } else if ((lead & 0xF8) == 0xF0) {
      width = 4;
    } else {
      return std::nullopt;
    }
    if (i + width > text.size()) return std::nullopt;
    for (std::size_t k = 1; k < width; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return std::nullopt;
    }
    if (width == 2 && lead == 0xC2 && static_cast<unsigned char>(text[i + 1]) < 0xA0) {
      return std::nullopt;  // C1 controls
    }
    i += width;
    ++count;
  }
  return count;
}

}  // namespace

std::unordered_set<std::string> LoadBlocklist(const std::filesystem::path& path) {
  std::unordered_set<std::string> words;
  for (const std::string& line : ReadLines(path)) words.insert(ToLower(line));
  return words;
}

bool PassesFilter(std::string_view text, const FilterPolicy& policy) {
  const std::optional<std::size_t> length = PrintableLength(text);
  if (!length || *length > policy.max_chars) return false;
  const std::vector<std::string> tokens = RawTokens(text);
  if (tokens.size() < policy.min_tokens) return false;
  for (const std::string& token : tokens) {
    if (policy.blocklist.contains(token)) return false;
  }
  return DuplicateRatio(tokens) <= policy.max_repeat_ratio;
}

std::vector<Candidate> ContentFilter(std::span<const Candidate> candidates,
                                     const FilterPolicy& policy) {
  std::vector<Candidate> kept;
  for (const Candidate& candidate : candidates) {
    if (PassesFilter(candidate.text, policy)) kept.push_back(candidate);
  }
  return kept;
}

double EngagementMargin(const SvmModel& lexical_model, std::string_view text) {
  return Score(lexical_model, ReplyFeatures(text));
}

std::optional<Candidate> SelectReply(std::span<const Candidate> candidates,
                                     const SvmModel* lexical_model) {
  if (candidates.empty()) return std::nullopt;
  int tier = 4;
  for (const Candidate& c : candidates) tier = std::min(tier, c.priority_tier);

  const Candidate* best = nullptr;
  if (tier == 1) {
    for (const Candidate& c : candidates) {
      if (c.priority_tier == 1 && (best == nullptr || c.rule_rank < best->rule_rank)) best = &c;
    }
    return *best;
  }
  if (tier != 3) {
    for (const Candidate& c : candidates) {
      if (c.priority_tier == tier) return c;
    }
  }

  std::optional<Candidate> chosen;
  for (const Candidate& c : candidates) {
    if (c.priority_tier != 3) continue;
    Candidate scored = c;
    scored.margin = lexical_model != nullptr ? EngagementMargin(*lexical_model, c.text)
                                             : c.margin.value_or(0.0);
    if (!chosen) {
      chosen = std::move(scored);
      continue;
    }
    // Larger margin, then retrieval before neural, then smaller text.
    const auto key = [](const Candidate& x) {
      return std::make_tuple(-*x.margin, x.generator == Generator::kRetrieval ? 0 : 1,
                             std::cref(x.text));
    };
    if (key(scored) < key(*chosen)) chosen = std::move(scored);
  }
  return chosen;
}

}  // namespace parley
