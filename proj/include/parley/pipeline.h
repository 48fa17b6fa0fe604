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

#ifndef PARLEY_PIPELINE_H_
#define PARLEY_PIPELINE_H_

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parley/config.h"
#include "parley/intent.h"
#include "parley/knowledge_base.h"
#include "parley/neural_reply.h"
#include "parley/reply_selection.h"
#include "parley/retrieval.h"
#include "parley/session.h"
#include "parley/svm.h"
#include "parley/topic_forest.h"

namespace parley {

// Time source for turn timestamps and stage latencies.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t NowSeconds() = 0;
  virtual double MonotonicMillis() = 0;
};

class SystemClock : public Clock {
 public:
  std::int64_t NowSeconds() override;
  double MonotonicMillis() override;
};

// Logical clock for tests. Time only moves when told to; latencies read 0.
class ManualClock : public Clock {
 public:
  explicit ManualClock(std::int64_t now = 0) : now_(now) {}
  std::int64_t NowSeconds() override;
  double MonotonicMillis() override;
  void Set(std::int64_t now);
  void Advance(std::int64_t secs);

 private:
  std::mutex mu_;
  std::int64_t now_;
};

// Everything the pipeline reads, loaded once and shared read-only.
struct PipelineResources {
  std::vector<IntentDef> intents;
  std::vector<BackstoryEntry> backstory;
  KnowledgeBase kb;
  std::vector<RelationTemplate> templates;
  std::vector<Fact> facts;
  CorpusIndex corpus;
  Dictionary dictionary;
  FilterPolicy filter;
  TopicModel topic_model;
  std::optional<SvmModel> engagement_model;
  TopicModels seq2seq;
};

// Throws std::runtime_error naming the first missing file, or the loader's
// exception for a malformed one.
PipelineResources LoadResources(const PipelineConfig& config);

// Trace latency keys, one per stage that ran.
inline constexpr std::string_view kStageContext = "context";
inline constexpr std::string_view kStageNlu = "nlu";
inline constexpr std::string_view kStageSelection = "selection";
inline constexpr std::string_view kStageTotal = "total";

struct Reply {
  std::string text;
  Trace trace;
};

class Pipeline {
 public:
  Pipeline(PipelineConfig config, PipelineResources resources, SessionStore& store,
           Clock& clock);

  Session CreateSession();

  // Appends the user turn, produces and appends the bot turn, and logs the
  // trace. Throws std::out_of_range for an unknown session and
  // std::invalid_argument for blank text. Calls for one session are
  // serialized; distinct sessions may run concurrently.
  Reply Respond(const std::string& session_id, std::string_view user_text);

  const PipelineConfig& config() const { return config_; }
  const PipelineResources& resources() const { return resources_; }
  SessionStore& store() { return store_; }

 private:
  Reply RespondLocked(const std::string& session_id, std::string_view user_text);
  void RecordTopic(const std::string& session_id, const TopicDistribution& raw,
                   const TopicDistribution& smoothed);

  PipelineConfig config_;
  PipelineResources resources_;
  SessionStore& store_;
  Clock& clock_;

  struct TopicState {
    // Raw per-turn distributions, newest last, at most five.
    std::deque<TopicDistribution> history;
    std::optional<TopicDistribution> last_smoothed;
  };
  std::mutex topics_mu_;
  std::map<std::string, TopicState> topics_;
};

}  // namespace parley

#endif  // PARLEY_PIPELINE_H_
