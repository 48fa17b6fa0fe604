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

#ifndef PARLEY_TEXT_H_
#define PARLEY_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace parley {

// A lowercase alphanumeric token with its byte span in the source text.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

using StopwordSet = std::unordered_set<std::string>;

// The shipped stopword list (mirrors data/stopwords.txt).
const StopwordSet& DefaultStopwords();
StopwordSet LoadStopwords(const std::filesystem::path& path);

// Splits on runs of non-alphanumeric ASCII and lowercases. Keeps stopwords.
std::vector<TokenSpan> TokenizeWithSpans(std::string_view text);
std::vector<std::string> RawTokens(std::string_view text);

// RawTokens minus stopwords.
std::vector<std::string> Tokenize(std::string_view text);
std::vector<std::string> Tokenize(std::string_view text, const StopwordSet& stopwords);

std::set<std::string> TokenSet(std::string_view text);

// |a ∩ b| / |a ∪ b|; 0 when both are empty.
double Jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// 1 - unique/total over a token list; 0 for an empty list.
double DuplicateRatio(const std::vector<std::string>& tokens);

std::string ToLower(std::string_view text);
std::string Trim(std::string_view text);

// 64-bit FNV-1a over the bytes of `data`.
std::uint64_t Fnv1a64(std::string_view data);

// Sparse real vector with a fixed dimension.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  const std::map<std::size_t, double>& entries() const { return entries_; }

  // Throws std::out_of_range if index >= dimension.
  void Add(std::size_t index, double value);
  void Set(std::size_t index, double value);
  double Get(std::size_t index) const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::map<std::size_t, double> entries_;
};

// index = fnv1a64(token) mod dim, value = occurrence count.
// dim must be a power of two.
FeatureVector HashFeatures(const std::vector<std::string>& tokens, std::size_t dim);

// Reads a file of one entry per line, trimming whitespace and skipping blanks.
std::vector<std::string> ReadLines(const std::filesystem::path& path);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_TEXT_H_
