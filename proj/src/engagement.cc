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

#include "parley/engagement.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "parley/prng.h"

namespace parley {

namespace {

using Json = nlohmann::json;

constexpr std::array<std::string_view, 12> kWarmWords = {
    "love", "great",    "awesome", "amazing", "funny",     "brilliant",
    "wonderful", "best", "beautiful", "hilarious", "perfect", "fantastic"};
constexpr std::array<std::string_view, 12> kColdWords = {
    "meh",  "boring", "whatever", "bad",       "dull",     "lame",
    "wrong", "worst", "ugly",     "pointless", "annoying", "nope"};
constexpr std::array<std::string_view, 20> kNeutralWords = {
    "think", "people", "time",  "really", "thing", "year", "make",
    "know",  "said",   "way",   "new",    "day",   "work", "say",
    "see",   "look",   "want",  "right",  "still", "maybe"};
constexpr std::array<std::string_view, 40> kPostWords = {
    "news",    "city",   "team",   "movie",   "phone",  "election", "school",  "music",
    "dog",     "car",    "game",   "science", "space",  "coffee",   "book",    "weather",
    "pizza",   "market", "police", "doctor",  "garden", "travel",   "camera",  "river",
    "bridge",  "museum", "robot",  "comic",   "island", "festival", "kitchen", "library",
    "stadium", "ocean",  "train",  "cat",     "laptop", "concert",  "farm",    "mountain"};

template <std::size_t N>
std::string_view Pick(const std::array<std::string_view, N>& words, Lcg64& rng) {
  return words[rng.UniformIndex(N)];
}

double Gaussian(Lcg64& rng) {
  const double u1 = rng.UniformDouble();
  const double u2 = rng.UniformDouble();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string JoinWords(const std::vector<std::string_view>& words) {
  std::string out;
  for (std::string_view word : words) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

double Overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return Jaccard(std::set<std::string>(a.begin(), a.end()),
                 std::set<std::string>(b.begin(), b.end()));
}

}  // namespace

std::string_view FeatureModeName(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::kLexical:
      return "lexical";
    case FeatureMode::kExternal:
      return "external";
    case FeatureMode::kFull:
      return "full";
  }
  return "full";
}

std::optional<FeatureMode> ParseFeatureMode(std::string_view name) {
  for (FeatureMode mode : {FeatureMode::kLexical, FeatureMode::kExternal, FeatureMode::kFull}) {
    if (FeatureModeName(mode) == name) return mode;
  }
  return std::nullopt;
}

std::optional<bool> LabelExample(std::int64_t comment_score) {
  if (comment_score > kEngagingScore) return true;
  if (comment_score == 0) return false;
  return std::nullopt;
}

FeatureVector ExtractFeatures(const EngagementExample& example, FeatureMode mode) {
  FeatureVector features(kEngagementDim);
  const std::vector<std::string> comment = RawTokens(example.comment_text);
  if (mode != FeatureMode::kExternal) {
    for (const std::string& token : comment) {
      features.Add(Fnv1a64(token) & (kBagOfWordsDim - 1), 1.0);
    }
    if (!comment.empty()) {
      features.Set(kTokenCountFeature, static_cast<double>(comment.size()) / 100.0);
      const double duplicate = DuplicateRatio(comment);
      if (duplicate != 0.0) features.Set(kDuplicateRatioFeature, duplicate);
    }
  }
  if (mode != FeatureMode::kLexical) {
    if (example.elapsed_secs < 0) throw std::invalid_argument("elapsed_secs must be >= 0");
    const double elapsed = std::log1p(static_cast<double>(example.elapsed_secs));
    const double upvotes = std::log1p(static_cast<double>(std::max<std::int64_t>(example.post_upvotes, 0)));
    const double overlap = Overlap(comment, RawTokens(example.post_text));
    if (elapsed != 0.0) features.Set(kElapsedFeature, elapsed);
    if (upvotes != 0.0) features.Set(kUpvotesFeature, upvotes);
    if (overlap != 0.0) features.Set(kOverlapFeature, overlap);
  }
  return features;
}

FeatureVector ReplyFeatures(std::string_view text) {
  EngagementExample example;
  example.comment_text = std::string(text);
  return ExtractFeatures(example, FeatureMode::kLexical);
}

LabeledFeatures PrepareTrainingData(std::span<const EngagementExample> examples,
                                    FeatureMode mode) {
  LabeledFeatures data;
  for (const EngagementExample& example : examples) {
    const std::optional<bool> label = LabelExample(example.comment_score);
    if (!label) continue;
    data.features.push_back(ExtractFeatures(example, mode));
    data.labels.push_back(*label ? 1 : -1);
  }
  return data;
}

std::vector<EngagementExample> SyntheticEngagementCorpus(std::size_t count, std::uint64_t seed) {
  Lcg64 rng(seed);
  std::vector<EngagementExample> examples;
  std::vector<double> combined;
  examples.reserve(count);
  combined.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    EngagementExample example;
    example.post_upvotes = std::llround(std::expm1(rng.Uniform(0.0, 9.0)));
    example.elapsed_secs = std::llround(std::expm1(rng.Uniform(0.0, 12.0)));

    std::vector<std::string_view> post;
    for (int w = 0; w < 8; ++w) post.push_back(Pick(kPostWords, rng));

    const double hidden = 2.0 * Gaussian(rng);
    const double warm_share = 0.4 / (1.0 + std::exp(-hidden));
    const double overlap_share = rng.Uniform(0.0, 0.8);
    const std::size_t length = 5 + rng.UniformIndex(8);
    std::vector<std::string_view> comment;
    for (std::size_t w = 0; w < length; ++w) {
      if (rng.UniformDouble() < overlap_share) {
        comment.push_back(post[rng.UniformIndex(post.size())]);
        continue;
      }
      const double u = rng.UniformDouble();
      if (u < warm_share) {
        comment.push_back(Pick(kWarmWords, rng));
      } else if (u < 0.4) {
        comment.push_back(Pick(kColdWords, rng));
      } else {
        comment.push_back(Pick(kNeutralWords, rng));
      }
    }
    example.post_text = JoinWords(post);
    example.comment_text = JoinWords(comment);

    const double external = 0.6 * std::log1p(static_cast<double>(example.post_upvotes)) -
                            0.5 * std::log1p(static_cast<double>(example.elapsed_secs)) +
                            4.0 * Overlap(RawTokens(example.comment_text),
                                          RawTokens(example.post_text));
    combined.push_back(external + hidden);
    examples.push_back(std::move(example));
  }
  if (examples.empty()) return examples;

  std::vector<double> sorted = combined;
  const auto middle = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
  std::nth_element(sorted.begin(), middle, sorted.end());
  const double threshold = *middle;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    examples[i].comment_score =
        combined[i] > threshold ? kEngagingScore + 1 + static_cast<std::int64_t>(rng.UniformIndex(800))
                                : 0;
  }
  return examples;
}

std::vector<EngagementExample> LoadEngagementCorpus(const std::filesystem::path& path) {
  std::vector<EngagementExample> examples;
  std::size_t line_number = 0;
  for (const std::string& line : ReadLines(path)) {
    ++line_number;
    const Json item = Json::parse(line);
    EngagementExample example;
    example.comment_text = item.at("comment_text").get<std::string>();
    example.comment_score = item.at("comment_score").get<std::int64_t>();
    example.post_text = item.at("post_text").get<std::string>();
    example.post_upvotes = item.at("post_upvotes").get<std::int64_t>();
    example.elapsed_secs = item.at("elapsed_secs").get<std::int64_t>();
    if (example.elapsed_secs < 0) {
      throw std::invalid_argument("negative elapsed_secs on line " + std::to_string(line_number));
    }
    examples.push_back(std::move(example));
  }
  return examples;
}

void SaveEngagementCorpus(std::span<const EngagementExample> examples,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const EngagementExample& example : examples) {
    out << Json{{"comment_text", example.comment_text},
                {"comment_score", example.comment_score},
                {"post_text", example.post_text},
                {"post_upvotes", example.post_upvotes},
                {"elapsed_secs", example.elapsed_secs}}
               .dump()
        << '\n';
  }
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace parley
