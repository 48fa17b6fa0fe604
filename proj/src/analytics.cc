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

#include "parley/analytics.h"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "parley/text.h"

namespace parley {

namespace {

constexpr std::array<std::string_view, 5> kRubric = {
    "Not human readable reply",
    "Understandable and somehow related reply",
    "Acceptable but not very meaningful and not very engaging reply",
    "Good not very engaging reply",
    "Excellent engaging and meaningful reply",
};

bool ContainsSequence(const std::vector<std::string>& tokens,
                      const std::vector<std::string>& needle) {
  if (needle.empty()) return false;
  return std::search(tokens.begin(), tokens.end(), needle.begin(), needle.end()) != tokens.end();
}

std::map<std::string, double> EmptyUsage() {
  std::map<std::string, double> usage;
  for (Generator g : kAllGenerators) usage[std::string(GeneratorName(g))] = 0.0;
  usage[std::string(kFallbackUsageKey)] = 0.0;
  return usage;
}

std::string Fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

}  // namespace

std::vector<std::string> DefaultMarkerWords() {
  return {kDefaultMarkerWords.begin(), kDefaultMarkerWords.end()};
}

std::string_view RatingMeaning(int rating) {
  if (rating < 1 || rating > 5) {
    throw std::out_of_range("rating must be in [1, 5], got " + std::to_string(rating));
  }
  return kRubric[static_cast<std::size_t>(rating - 1)];
}

StatsTable ComputeStats(std::span<const Session> sessions, std::span<const TraceRecord> traces,
                        std::span<const std::string> marker_words) {
  StatsTable table;
  std::array<std::vector<std::size_t>, 5> turn_counts;
  std::array<std::map<std::string, std::size_t>, 5> marker_hits;
  std::unordered_map<std::string, int> rating_of;

  std::vector<std::pair<std::string, std::vector<std::string>>> markers;
  for (const std::string& word : marker_words) markers.emplace_back(word, RawTokens(word));

  for (const Session& session : sessions) {
    if (!session.rating) {
      ++table.unrated_sessions;
      continue;
    }
    const int rating = *session.rating;
    if (rating < 1 || rating > 5) continue;
    const auto r = static_cast<std::size_t>(rating - 1);
    rating_of[session.id] = rating;
    ++table.rated_sessions;
    ++table.rating_histogram[r];

    std::size_t user_turns = 0;
    std::vector<std::vector<std::string>> user_tokens;
    for (const Turn& turn : session.turns) {
      if (turn.speaker != Speaker::kUser) continue;
      ++user_turns;
      user_tokens.push_back(RawTokens(turn.text));
    }
    turn_counts[r].push_back(user_turns);
    for (const auto& [word, tokens] : markers) {
      const bool hit = std::any_of(user_tokens.begin(), user_tokens.end(),
                                   [&](const auto& t) { return ContainsSequence(t, tokens); });
      if (hit) ++marker_hits[r][word];
    }
  }

  std::array<std::map<std::string, std::size_t>, 5> usage_counts;
  std::array<std::size_t, 5> trace_totals{};
  for (const TraceRecord& record : traces) {
    auto it = rating_of.find(record.session_id);
    if (it == rating_of.end()) continue;
    const auto r = static_cast<std::size_t>(it->second - 1);
    const std::string key = record.trace.chosen_generator
                                ? std::string(GeneratorName(*record.trace.chosen_generator))
                                : std::string(kFallbackUsageKey);
    ++usage_counts[r][key];
    ++trace_totals[r];
  }

  double rating_sum = 0.0;
  std::size_t at_least_three = 0;
  for (std::size_t r = 0; r < 5; ++r) {
    RatingStats& row = table.per_rating[r];
    row.rating = static_cast<int>(r + 1);
    std::vector<std::size_t>& counts = turn_counts[r];
    row.session_count = counts.size();
    rating_sum += static_cast<double>(row.rating) * static_cast<double>(counts.size());
    if (row.rating >= 3) at_least_three += counts.size();
    if (!counts.empty()) {
      const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
      row.mean_turns = total / static_cast<double>(counts.size());
      std::sort(counts.begin(), counts.end());
      row.median_turns = static_cast<double>(counts[(counts.size() - 1) / 2]);
    }
    for (const auto& [word, tokens] : markers) {
      row.marker_word_pct[word] =
          counts.empty() ? 0.0
                         : 100.0 * static_cast<double>(marker_hits[r][word]) /
                               static_cast<double>(counts.size());
    }
    row.generator_usage = EmptyUsage();
    if (trace_totals[r] > 0) {
      for (const auto& [key, count] : usage_counts[r]) {
        row.generator_usage[key] =
            static_cast<double>(count) / static_cast<double>(trace_totals[r]);
      }
    }
  }
  if (table.rated_sessions > 0) {
    const double rated = static_cast<double>(table.rated_sessions);
    table.mean_rating = rating_sum / rated;
    table.pct_rated_ge_3 = 100.0 * static_cast<double>(at_least_three) / rated;
  }
  return table;
}

StatsTable ComputeStatsFromLogs(const std::filesystem::path& dir,
                                std::span<const std::string> marker_words) {
  const std::vector<Session> sessions = LoadSessions(dir);
  const std::vector<TraceRecord> traces = LoadTraces(dir);
  return ComputeStats(sessions, traces, marker_words);
}

nlohmann::json StatsToJson(const StatsTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RatingStats& row : table.per_rating) {
    rows.push_back({{"rating", row.rating},
                    {"meaning", RatingMeaning(row.rating)},
                    {"session_count", row.session_count},
                    {"mean_turns", row.mean_turns},
                    {"median_turns", row.median_turns},
                    {"marker_word_pct", row.marker_word_pct},
                    {"generator_usage", row.generator_usage}});
  }
  nlohmann::json histogram = nlohmann::json::object();
  for (std::size_t r = 0; r < 5; ++r) histogram[std::to_string(r + 1)] = table.rating_histogram[r];
  return {{"per_rating", std::move(rows)},
          {"overall",
           {{"mean_rating", table.mean_rating},
            {"pct_rated_ge_3", table.pct_rated_ge_3},
            {"rating_histogram", std::move(histogram)},
            {"rated_sessions", table.rated_sessions},
            {"unrated_sessions", table.unrated_sessions}}}};
}

std::string StatsToText(const StatsTable& table) {
  std::vector<std::string> header = {"rating", "sessions", "mean_turns", "median_turns"};
  std::vector<std::string> markers;
  std::vector<std::string> generators;
  if (!table.per_rating.front().marker_word_pct.empty()) {
    for (const auto& [word, pct] : table.per_rating.front().marker_word_pct) {
      markers.push_back(word);
      header.push_back("%" + word);
    }
  }
  for (const auto& [name, share] : table.per_rating.front().generator_usage) {
    generators.push_back(name);
    header.push_back(name);
  }

  std::vector<std::vector<std::string>> rows = {header};
  for (const RatingStats& row : table.per_rating) {
    std::vector<std::string> cells = {std::to_string(row.rating),
                                      std::to_string(row.session_count),
                                      Fixed(row.mean_turns, 2), Fixed(row.median_turns, 1)};
    for (const std::string& word : markers) cells.push_back(Fixed(row.marker_word_pct.at(word), 1));
    for (const std::string& name : generators) {
      cells.push_back(Fixed(row.generator_usage.at(name), 3));
    }
    rows.push_back(std::move(cells));
  }

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& cells : rows) {
    for (std::size_t c = 0; c < cells.size(); ++c) widths[c] = std::max(widths[c], cells[c].size());
  }
  std::ostringstream out;
  for (const auto& cells : rows) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      out << std::setw(static_cast<int>(widths[c])) << cells[c];
    }
    out << '\n';
  }
  out << '\n';
  out << "rated sessions:   " << table.rated_sessions << '\n';
  out << "unrated sessions: " << table.unrated_sessions << '\n';
  out << "mean rating:      " << Fixed(table.mean_rating, 3) << '\n';
  out << "rated >= 3:       " << Fixed(table.pct_rated_ge_3, 1) << "%\n";
  out << "histogram:       ";
  for (std::size_t r = 0; r < 5; ++r) out << ' ' << (r + 1) << ':' << table.rating_histogram[r];
  out << '\n';
  return out.str();
}

}  // namespace parley
