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

#include "parley/config.h"

#include <charconv>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "parley/text.h"

namespace parley {

namespace {

template <typename T>
T ParseNumber(const std::string& value, const std::string& key) {
  T out{};
  const char* end = value.data() + value.size();
  const auto result = std::from_chars(value.data(), end, out);
  if (result.ec != std::errc() || result.ptr != end) {
    throw std::invalid_argument("bad value for " + key + ": " + value);
  }
  return out;
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

PipelineConfig ParseConfig(std::string_view text, const std::filesystem::path& base_dir) {
  PipelineConfig config;
  const auto path = [&](std::filesystem::path& field) {
    return [&field, &base_dir](const std::string& value, const std::string&) {
      const std::filesystem::path p(value);
      if (p.empty()) {
        field.clear();
      } else {
        field = p.is_absolute() ? p : base_dir / p;
      }
    };
  };
  const auto real = [](double& field) {
    return [&field](const std::string& value, const std::string& key) {
      field = ParseNumber<double>(value, key);
    };
  };
  const auto size = [](std::size_t& field) {
    return [&field](const std::string& value, const std::string& key) {
      field = ParseNumber<std::size_t>(value, key);
    };
  };

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"intents", path(config.intents_path)},
      {"backstory", path(config.backstory_path)},
      {"kb", path(config.kb_path)},
      {"templates", path(config.templates_path)},
      {"facts", path(config.facts_path)},
      {"corpus", path(config.corpus_path)},
      {"dictionary", path(config.dictionary_path)},
      {"blocklist", path(config.blocklist_path)},
      {"topic_model", path(config.topic_model_path)},
      {"engagement_model", path(config.engagement_model_path)},
      {"log_dir", path(config.log_dir)},
      {"intent_threshold", real(config.intent_threshold)},
      {"backstory_threshold", real(config.backstory_threshold)},
      {"entity_threshold", real(config.entity_threshold)},
      {"max_misspell_ratio", real(config.max_misspell_ratio)},
      {"max_repeat_ratio", real(config.max_repeat_ratio)},
      {"retrieval_window_secs",
       [&config](const std::string& value, const std::string& key) {
         config.retrieval_window_secs = ParseNumber<std::int64_t>(value, key);
       }},
      {"retrieval_k", size(config.retrieval_k)},
      {"min_reply_tokens", size(config.min_reply_tokens)},
      {"max_reply_chars", size(config.max_reply_chars)},
      {"neural_max_len", size(config.neural_max_len)},
      {"seed",
       [&config](const std::string& value, const std::string& key) {
         config.seed = ParseNumber<std::uint64_t>(value, key);
       }},
      {"fallback_line",
       [&config](const std::string& value, const std::string&) { config.fallback_line = value; }},
      {"marker_words",
       [&config](const std::string& value, const std::string&) {
         config.marker_words = SplitList(value);
       }},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_number) + ": missing '='");
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    const std::string value = Trim(trimmed.substr(eq + 1));
    try {
      if (key.starts_with("seq2seq.")) {
        const auto topic = ParseTopic(std::string_view(key).substr(8));
        if (!topic) throw std::invalid_argument("unknown topic in " + key);
        path(config.seq2seq_paths[*topic])(value, key);
        continue;
      }
      auto it = setters.find(key);
      if (it == setters.end()) throw std::invalid_argument("unknown key " + key);
      it->second(value, key);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_number) + ": " +
                                  e.what());
    }
  }
  if (!config.seq2seq_paths.empty() && !config.seq2seq_paths.contains(Topic::kGeneral)) {
    throw std::invalid_argument("config names seq2seq models but no seq2seq.General");
  }
  return config;
}

PipelineConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(ReadFile(path), path.parent_path());
}

std::vector<std::filesystem::path> ReferencedFiles(const PipelineConfig& config) {
  std::vector<std::filesystem::path> files = {
      config.intents_path,  config.backstory_path, config.kb_path,
      config.templates_path, config.facts_path,    config.corpus_path,
      config.dictionary_path, config.blocklist_path, config.topic_model_path};
  if (!config.engagement_model_path.empty()) files.push_back(config.engagement_model_path);
  for (const auto& [topic, path] : config.seq2seq_paths) files.push_back(path);
  return files;
}

}  // namespace parley
