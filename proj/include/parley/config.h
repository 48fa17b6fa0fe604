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

#ifndef PARLEY_CONFIG_H_
#define PARLEY_CONFIG_H_

// Pipeline configuration, read from a flat "key = value" text file. Blank
// lines and lines starting with '#' are ignored. Relative paths resolve
// against the directory holding the file. Unknown keys are errors.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parley/topics.h"

namespace parley {

struct PipelineConfig {
  std::filesystem::path intents_path;
  std::filesystem::path backstory_path;
  std::filesystem::path kb_path;
  std::filesystem::path templates_path;
  std::filesystem::path facts_path;
  std::filesystem::path corpus_path;
  std::filesystem::path dictionary_path;
  std::filesystem::path blocklist_path;
  std::filesystem::path topic_model_path;
  // Optional; without it tier-3 margins are 0.
  std::filesystem::path engagement_model_path;
  // Keyed by topic; General is required when any model is given.
  std::map<Topic, std::filesystem::path> seq2seq_paths;
  // Empty keeps sessions and traces in memory.
  std::filesystem::path log_dir;

  double intent_threshold = 0.6;
  double backstory_threshold = 0.7;
  double entity_threshold = 0.5;
  double max_misspell_ratio = 0.2;
  std::int64_t retrieval_window_secs = 7 * 24 * 3600;
  std::size_t retrieval_k = 100;
  std::size_t min_reply_tokens = 1;
  std::size_t max_reply_chars = 280;
  double max_repeat_ratio = 0.5;
  // 0 uses each model's own max_len.
  std::size_t neural_max_len = 0;
  std::uint64_t seed = 42;
  std::string fallback_line = "I am not sure what to say to that. What else is on your mind?";
  std::vector<std::string> marker_words = {"love", "friend", "hate"};
};

// Throws std::invalid_argument with the line number on malformed input.
PipelineConfig ParseConfig(std::string_view text, const std::filesystem::path& base_dir);
PipelineConfig LoadConfig(const std::filesystem::path& path);

// Every file path the config names, for startup existence checks.
std::vector<std::filesystem::path> ReferencedFiles(const PipelineConfig& config);

}  // namespace parley

#endif  // PARLEY_CONFIG_H_
