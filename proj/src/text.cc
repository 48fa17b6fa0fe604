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

#include "parley/text.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parley {

namespace {

bool IsTokenChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 &&
         static_cast<unsigned char>(c) < 0x80;
}

}  // namespace

const StopwordSet& DefaultStopwords() {
  static const StopwordSet kStopwords = {
      "a",    "an",   "the",   "and",   "or",    "but",  "if",   "then", "so",
      "of",   "in",   "on",    "at",    "to",    "for",  "with", "by",   "from",
      "as",   "into", "about", "up",    "out",   "is",   "was",  "were", "be",
      "been", "being", "am",   "do",    "does",  "did",  "has",  "have", "had",
      "his",  "its",  "it",    "this",  "that",  "these", "those", "there",
      "here", "how",  "than",  "too",   "very",  "just"};
  return kStopwords;
}

StopwordSet LoadStopwords(const std::filesystem::path& path) {
  StopwordSet words;
  for (const std::string& line : ReadLines(path)) words.insert(ToLower(line));
  return words;
}

std::vector<TokenSpan> TokenizeWithSpans(std::string_view text) {
  std::vector<TokenSpan> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsTokenChar(text[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < text.size() && IsTokenChar(text[i])) ++i;
    tokens.push_back(TokenSpan{ToLower(text.substr(begin, i - begin)), begin, i});
  }
  return tokens;
}

std::vector<std::string> RawTokens(std::string_view text) {
  std::vector<std::string> tokens;
  for (TokenSpan& span : TokenizeWithSpans(text)) tokens.push_back(std::move(span.text));
  return tokens;
}

std::vector<std::string> Tokenize(std::string_view text) {
  return Tokenize(text, DefaultStopwords());
}

std::vector<std::string> Tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens = RawTokens(text);
  std::erase_if(tokens, [&](const std::string& t) { return stopwords.count(t) > 0; });
  return tokens;
}

std::set<std::string> TokenSet(std::string_view text) {
  std::vector<std::string> tokens = Tokenize(text);
  return {tokens.begin(), tokens.end()};
}

double Jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const std::string& token : a) common += b.count(token);
  const std::size_t total = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(total);
}

double DuplicateRatio(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return 0.0;
  std::set<std::string> unique(tokens.begin(), tokens.end());
  return 1.0 - static_cast<double>(unique.size()) / static_cast<double>(tokens.size());
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::string Trim(std::string_view text) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void FeatureVector::Add(std::size_t index, double value) {
  if (index >= dimension_) throw std::out_of_range("feature index out of range");
  entries_[index] += value;
}

void FeatureVector::Set(std::size_t index, double value) {
  if (index >= dimension_) throw std::out_of_range("feature index out of range");
  entries_[index] = value;
}

double FeatureVector::Get(std::size_t index) const {
  auto it = entries_.find(index);
  return it == entries_.end() ? 0.0 : it->second;
}

FeatureVector HashFeatures(const std::vector<std::string>& tokens, std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("feature dimension must be a power of two");
  }
  FeatureVector features(dim);
  for (const std::string& token : tokens) {
    features.Add(static_cast<std::size_t>(Fnv1a64(token) & (dim - 1)), 1.0);
  }
  return features;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = Trim(line);
    if (!trimmed.empty()) lines.push_back(std::move(trimmed));
  }
  return lines;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace parley
