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

#ifndef PARLEY_ENGAGEMENT_H_
#define PARLEY_ENGAGEMENT_H_

// Engagement examples and their feature encoding.
//
// Every feature vector has the same layout regardless of mode:
//   [0, 2^14)      hashed bag of words of the comment      (lexical)
//   2^14           token count / 100                       (lexical)
//   2^14 + 1       duplicate ratio                         (lexical)
//   2^14 + 2       log(1 + elapsed_secs)                   (external)
//   2^14 + 3       log(1 + post_upvotes)                   (external)
//   2^14 + 4       Jaccard(comment tokens, post tokens)    (external)
// Blocks outside the selected mode stay zero.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parley/text.h"

namespace parley {

enum class FeatureMode { kLexical, kExternal, kFull };

std::string_view FeatureModeName(FeatureMode mode);
std::optional<FeatureMode> ParseFeatureMode(std::string_view name);

inline constexpr std::size_t kBagOfWordsDim = std::size_t{1} << 14;
inline constexpr std::size_t kTokenCountFeature = kBagOfWordsDim;
inline constexpr std::size_t kDuplicateRatioFeature = kBagOfWordsDim + 1;
inline constexpr std::size_t kElapsedFeature = kBagOfWordsDim + 2;
inline constexpr std::size_t kUpvotesFeature = kBagOfWordsDim + 3;
inline constexpr std::size_t kOverlapFeature = kBagOfWordsDim + 4;
inline constexpr std::size_t kEngagementDim = kBagOfWordsDim + 5;

// Comment scores above this are engaging; a score of exactly 0 is not.
inline constexpr std::int64_t kEngagingScore = 200;

struct EngagementExample {
  std::string comment_text;
  std::int64_t comment_score = 0;
  std::string post_text;
  std::int64_t post_upvotes = 0;
  std::int64_t elapsed_secs = 0;
  bool operator==(const EngagementExample&) const = default;
};

// true = engaging, false = non-engaging, nullopt = excluded from training.
std::optional<bool> LabelExample(std::int64_t comment_score);

// Tokens are the raw lowercase alphanumeric tokens (stopwords kept).
FeatureVector ExtractFeatures(const EngagementExample& example, FeatureMode mode);

// Features of a bare reply text, as used at chat time.
FeatureVector ReplyFeatures(std::string_view text);

// Examples with a defined label, split into features and +1/-1 labels.
struct LabeledFeatures {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
};
LabeledFeatures PrepareTrainingData(std::span<const EngagementExample> examples,
                                    FeatureMode mode);

// A corpus whose label thresholds a linear score of the external features
// plus a hidden noise term. The same noise term biases the comment's word
// choice toward "warm" or "cold" vocabulary, so lexical features carry part
// of what the external block misses. Examples above the median combined score
// are engaging (score 201 to 1000); the rest score 0.
std::vector<EngagementExample> SyntheticEngagementCorpus(std::size_t count, std::uint64_t seed);

// One JSON object per line with the five example fields.
std::vector<EngagementExample> LoadEngagementCorpus(const std::filesystem::path& path);
void SaveEngagementCorpus(std::span<const EngagementExample> examples,
                          const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_ENGAGEMENT_H_
