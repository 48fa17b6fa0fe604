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

#ifndef PARLEY_ANALYTICS_H_
#define PARLEY_ANALYTICS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parley/session.h"

namespace parley {

inline constexpr std::array<std::string_view, 3> kDefaultMarkerWords = {"love", "friend",
                                                                        "hate"};

// Usage key for traces that ended in the fallback line.
inline constexpr std::string_view kFallbackUsageKey = "fallback";

struct RatingStats {
  int rating = 0;
  std::size_t session_count = 0;
  // Dialog turns are user turns. Both are 0 for an empty row; the median is
  // the lower median for even counts.
  double mean_turns = 0.0;
  double median_turns = 0.0;
  // Percent of the row's sessions whose user turns contain the marker as a
  // whole word or word sequence, case-insensitively.
  std::map<std::string, double> marker_word_pct;
  // Share of the row's traces choosing each generator, plus kFallbackUsageKey.
  // Every key is present; all are 0 when the row has no traces.
  std::map<std::string, double> generator_usage;
  bool operator==(const RatingStats&) const = default;
};

struct StatsTable {
  // Index r - 1 holds rating r.
  std::array<RatingStats, 5> per_rating;
  double mean_rating = 0.0;
  double pct_rated_ge_3 = 0.0;
  std::array<std::size_t, 5> rating_histogram{};
  std::size_t rated_sessions = 0;
  std::size_t unrated_sessions = 0;
  bool operator==(const StatsTable&) const = default;
};

// Unrated sessions and their traces are left out of every per-rating row and
// only counted in unrated_sessions.
StatsTable ComputeStats(std::span<const Session> sessions, std::span<const TraceRecord> traces,
                        std::span<const std::string> marker_words);

// Reads the transcript and trace logs under `dir`.
StatsTable ComputeStatsFromLogs(const std::filesystem::path& dir,
                                std::span<const std::string> marker_words);

std::vector<std::string> DefaultMarkerWords();

// Rubric text for ratings 1 to 5. Throws std::out_of_range otherwise.
std::string_view RatingMeaning(int rating);

nlohmann::json StatsToJson(const StatsTable& table);
// Aligned plain-text rendering.
std::string StatsToText(const StatsTable& table);

}  // namespace parley

#endif  // PARLEY_ANALYTICS_H_
