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

#include "parley/retrieval.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json.hpp"
#include "parley/prng.h"
#include "parley/text.h"

namespace parley {

namespace {

bool IsAsciiSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    if (i > begin) parts.push_back(text.substr(begin, i - begin));
  }
  return parts;
}

// Decodes one UTF-8 sequence at `pos`; returns U+FFFD and advances one byte
// on malformed input.
char32_t DecodeUtf8(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  std::size_t length = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + length > text.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < length; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  pos += length;
  return cp;
}

// Punctuation, symbols, emoji, joiners and variation selectors.
bool IsSymbolCodepoint(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) == 0;
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
         (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE00 && cp <= 0xFE0F) ||
         (cp >= 0xFE30 && cp <= 0xFE4F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
         cp == 0xFFFD || (cp >= 0x1F000 && cp <= 0x1FAFF) ||
         (cp >= 0xE0000 && cp <= 0xE007F);
}

bool IsArtifactToken(std::string_view token) {
  const std::string lower = ToLower(token);
  if (lower.starts_with("http://") || lower.starts_with("https://") ||
      lower.starts_with("www.")) {
    return true;
  }
  if (token.front() == '@' || token.front() == '#') return true;
  std::size_t pos = 0;
  while (pos < token.size()) {
    if (!IsSymbolCodepoint(DecodeUtf8(token, pos))) return false;
  }
  return true;
}

bool IsAsciiLetter(char c) {
  return static_cast<unsigned char>(c) < 0x80 && std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool HasLetterRun(std::string_view word) {
  std::size_t run = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    run = (i > 0 && word[i] == word[i - 1]) ? run + 1 : 1;
    if (run >= 3 && IsAsciiLetter(word[i])) return true;
  }
  return false;
}

}  // namespace

CorpusIndex::CorpusIndex(std::vector<CorpusDoc> docs) : docs_(std::move(docs)) {
  for (std::size_t id = 0; id < docs_.size(); ++id) {
    if (docs_[id].text.empty()) throw std::invalid_argument("corpus document with empty text");
    std::vector<std::string> tokens = Tokenize(docs_[id].text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (std::string& token : tokens) postings_[std::move(token)].push_back(id);
  }
}

const std::vector<std::size_t>* CorpusIndex::Postings(const std::string& token) const {
  auto it = postings_.find(token);
  return it == postings_.end() ? nullptr : &it->second;
}

std::optional<Query> BuildQuery(std::span<const EntityMention> mentions, const KnowledgeBase& kb) {
  if (mentions.empty()) return std::nullopt;
  Query query;
  for (const EntityMention& mention : mentions) {
    query.groups.push_back({mention.surface, kb.At(mention.kb_id).label});
  }
  return query;
}

bool MatchesQuery(const Query& query, const std::unordered_set<std::string>& doc_tokens) {
  if (query.groups.empty()) return false;
  for (const auto& group : query.groups) {
    bool group_ok = false;
    for (const std::string& phrase : group) {
      const std::vector<std::string> tokens = Tokenize(phrase);
      if (tokens.empty()) continue;
      if (std::all_of(tokens.begin(), tokens.end(),
                      [&](const std::string& t) { return doc_tokens.count(t) > 0; })) {
        group_ok = true;
        break;
      }
    }
    if (!group_ok) return false;
  }
  return true;
}

std::vector<std::size_t> SearchIds(const CorpusIndex& index, const Query& query,
                                   std::int64_t now, const SearchOptions& options) {
  if (query.groups.empty()) return {};
  std::optional<std::vector<std::size_t>> result;
  for (const auto& group : query.groups) {
    std::vector<std::size_t> group_docs;
    for (const std::string& phrase : group) {
      const std::vector<std::string> tokens = Tokenize(phrase);
      if (tokens.empty()) continue;
      std::optional<std::vector<std::size_t>> phrase_docs;
      for (const std::string& token : tokens) {
        const std::vector<std::size_t>* postings = index.Postings(token);
        if (postings == nullptr) {
          phrase_docs = std::vector<std::size_t>();
          break;
        }
        if (!phrase_docs) {
          phrase_docs = *postings;
          continue;
        }
        std::vector<std::size_t> both;
        std::set_intersection(phrase_docs->begin(), phrase_docs->end(), postings->begin(),
                              postings->end(), std::back_inserter(both));
        phrase_docs = std::move(both);
      }
      std::vector<std::size_t> merged;
      std::set_union(group_docs.begin(), group_docs.end(), phrase_docs->begin(),
                     phrase_docs->end(), std::back_inserter(merged));
      group_docs = std::move(merged);
    }
    if (!result) {
      result = std::move(group_docs);
    } else {
      std::vector<std::size_t> both;
      std::set_intersection(result->begin(), result->end(), group_docs.begin(),
                            group_docs.end(), std::back_inserter(both));
      result = std::move(both);
    }
  }

  std::vector<std::size_t> ids;
  const std::int64_t oldest = now - options.window_secs;
  for (std::size_t id : *result) {
    if (index.docs()[id].timestamp >= oldest) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    const std::int64_t ta = index.docs()[a].timestamp;
    const std::int64_t tb = index.docs()[b].timestamp;
    return ta != tb ? ta > tb : a < b;
  });
  if (ids.size() > options.k) ids.resize(options.k);
  return ids;
}

std::vector<CorpusDoc> Search(const CorpusIndex& index, const Query& query, std::int64_t now,
                              const SearchOptions& options) {
  std::vector<CorpusDoc> docs;
  for (std::size_t id : SearchIds(index, query, now, options)) docs.push_back(index.docs()[id]);
  return docs;
}

std::optional<std::string> CleanText(std::string_view text) {
  std::string out;
  for (std::string_view token : SplitWhitespace(text)) {
    if (IsArtifactToken(token)) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string NormalizeForDedup(std::string_view text) {
  std::string stripped;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::ispunct(u) != 0) continue;
    stripped.push_back(c);
  }
  std::string out;
  for (std::string_view token : SplitWhitespace(stripped)) {
    if (!out.empty()) out.push_back(' ');
    out += ToLower(token);
  }
  return out;
}

double MisspellRatio(std::string_view text, const Dictionary& dictionary) {
  std::size_t words = 0;
  std::size_t misspelled = 0;
  for (std::string_view raw : SplitWhitespace(text)) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    const auto is_edge = [](char c) {
      const auto u = static_cast<unsigned char>(c);
      return u < 0x80 && std::isalnum(u) == 0;
    };
    while (begin < end && is_edge(raw[begin])) ++begin;
    while (end > begin && is_edge(raw[end - 1])) --end;
    const std::string_view word = raw.substr(begin, end - begin);
    const bool has_non_ascii = std::any_of(word.begin(), word.end(), [](char c) {
      return static_cast<unsigned char>(c) >= 0x80;
    });
    const bool has_letter = has_non_ascii || std::any_of(word.begin(), word.end(), IsAsciiLetter);
    if (!has_letter) continue;
    ++words;
    const std::string lower = ToLower(word);
    if (has_non_ascii || HasLetterRun(lower) || dictionary.count(lower) == 0) ++misspelled;
  }
  if (words == 0) return 0.0;
  return static_cast<double>(misspelled) / static_cast<double>(words);
}

std::vector<std::string> RetrievalSurvivors(const Query& query, const CorpusIndex& index,
                                            const Dictionary& dictionary, std::int64_t now,
                                            const RetrievalOptions& options) {
  std::vector<std::string> survivors;
  std::unordered_set<std::string> seen;
  for (const CorpusDoc& doc : Search(index, query, now, options.search)) {
    std::optional<std::string> cleaned = CleanText(doc.text);
    if (!cleaned) continue;
    if (!seen.insert(NormalizeForDedup(*cleaned)).second) continue;
    if (MisspellRatio(*cleaned, dictionary) > options.max_misspell_ratio) continue;
    survivors.push_back(std::move(*cleaned));
  }
  return survivors;
}

std::optional<Candidate> RetrievalReply(std::span<const EntityMention> mentions,
                                        const KnowledgeBase& kb, const CorpusIndex& index,
                                        const Dictionary& dictionary, std::int64_t now,
                                        std::uint64_t seed, const RetrievalOptions& options) {
  const std::optional<Query> query = BuildQuery(mentions, kb);
  if (!query) return std::nullopt;
  std::vector<std::string> survivors = RetrievalSurvivors(*query, index, dictionary, now, options);
  if (survivors.empty()) return std::nullopt;
  Lcg64 rng(seed);
  return Candidate::Make(std::move(survivors[rng.UniformIndex(survivors.size())]),
                         Generator::kRetrieval);
}

std::vector<CorpusDoc> LoadCorpus(const std::filesystem::path& path) {
  std::vector<CorpusDoc> docs;
  for (const std::string& line : ReadLines(path)) {
    const nlohmann::json json = nlohmann::json::parse(line);
    docs.push_back(CorpusDoc{json.at("text").get<std::string>(),
                             json.at("timestamp").get<std::int64_t>()});
  }
  return docs;
}

Dictionary LoadDictionary(const std::filesystem::path& path) {
  Dictionary words;
  for (const std::string& line : ReadLines(path)) words.insert(ToLower(line));
  return words;
}

}  // namespace parley
