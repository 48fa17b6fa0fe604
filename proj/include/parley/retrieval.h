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

#ifndef PARLEY_RETRIEVAL_H_
#define PARLEY_RETRIEVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parley/entity_linker.h"
#include "parley/knowledge_base.h"
#include "parley/session.h"

namespace parley {

struct CorpusDoc {
  std::string text;
  std::int64_t timestamp = 0;

  bool operator==(const CorpusDoc&) const = default;
};

// Inverted index from (stopword-filtered) token to ascending doc ids.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  // Throws std::invalid_argument for a document with empty text.
  explicit CorpusIndex(std::vector<CorpusDoc> docs);

  const std::vector<CorpusDoc>& docs() const { return docs_; }
  // nullptr when the token never occurs.
  const std::vector<std::size_t>* Postings(const std::string& token) const;

 private:
  std::vector<CorpusDoc> docs_;
  std::unordered_map<std::string, std::vector<std::size_t>> postings_;
};

// Conjunction of groups; each group is a disjunction of phrases.
struct Query {
  std::vector<std::vector<std::string>> groups;

  bool operator==(const Query&) const = default;
};

struct SearchOptions {
  std::size_t k = 100;
  std::int64_t window_secs = 7 * 24 * 3600;
};

struct RetrievalOptions {
  SearchOptions search;
  double max_misspell_ratio = 0.2;
};

using Dictionary = std::unordered_set<std::string>;

// One group per mention: [surface form, KB label]. nullopt without mentions.
std::optional<Query> BuildQuery(std::span<const EntityMention> mentions, const KnowledgeBase& kb);

// True if, for every group, some phrase has all of its tokens in `doc_tokens`.
// A phrase without content tokens matches nothing.
bool MatchesQuery(const Query& query, const std::unordered_set<std::string>& doc_tokens);

// Matching doc ids with timestamp >= now - window, newest first (ties by id),
// at most k of them.
std::vector<std::size_t> SearchIds(const CorpusIndex& index, const Query& query,
                                   std::int64_t now, const SearchOptions& options = {});
std::vector<CorpusDoc> Search(const CorpusIndex& index, const Query& query, std::int64_t now,
                              const SearchOptions& options = {});

// Drops URL, @mention, #hashtag and punctuation/symbol/emoji-only tokens and
// collapses whitespace. nullopt if nothing is left.
std::optional<std::string> CleanText(std::string_view text);

// Lowercase, punctuation removed, whitespace collapsed.
std::string NormalizeForDedup(std::string_view text);

// Share of words that are out of dictionary, contain non-ASCII letters, or
// contain a run of three identical letters. 0 for text without words.
double MisspellRatio(std::string_view text, const Dictionary& dictionary);

// Cleaned, deduplicated, spell-filtered search results in search order.
std::vector<std::string> RetrievalSurvivors(const Query& query, const CorpusIndex& index,
                                            const Dictionary& dictionary, std::int64_t now,
                                            const RetrievalOptions& options = {});

std::optional<Candidate> RetrievalReply(std::span<const EntityMention> mentions,
                                        const KnowledgeBase& kb, const CorpusIndex& index,
                                        const Dictionary& dictionary, std::int64_t now,
                                        std::uint64_t seed, const RetrievalOptions& options = {});

// Corpus file: one JSON object {"text", "timestamp"} per line.
std::vector<CorpusDoc> LoadCorpus(const std::filesystem::path& path);
// Dictionary file: one lowercase word per line.
Dictionary LoadDictionary(const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_RETRIEVAL_H_
