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

#ifndef PARLEY_TOPICS_H_
#define PARLEY_TOPICS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace parley {

// Conversation topics. The enumeration order is the tie-break order used
// wherever an argmax over topics is taken.
enum class Topic { kPolitics, kLife, kSports, kEntertainment, kTechnology, kGeneral };

inline constexpr std::size_t kNumTopics = 6;

inline constexpr std::array<std::string_view, kNumTopics> kTopicNames = {
    "Politics", "Life", "Sports", "Entertainment", "Technology", "General"};

inline std::string_view TopicName(Topic topic) {
  return kTopicNames[static_cast<std::size_t>(topic)];
}

inline std::optional<Topic> ParseTopic(std::string_view name) {
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    if (kTopicNames[i] == name) return static_cast<Topic>(i);
  }
  return std::nullopt;
}

}  // namespace parley

#endif  // PARLEY_TOPICS_H_
