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

#include <stdexcept>
#include <string>

#include "parley/codec.h"
#include "parley/topics.h"

namespace parley {

namespace {

Generator GeneratorFromJson(const Json& json) {
  auto generator = ParseGenerator(json.get<std::string>());
  if (!generator) {
    throw std::invalid_argument("unknown generator " + json.get<std::string>());
  }
  return *generator;
}

}  // namespace

Json TurnToJson(const std::string& session_id, const Turn& turn) {
  return Json{{"record", "turn"},
              {"session_id", session_id},
              {"turn_index", turn.turn_index},
              {"speaker", SpeakerName(turn.speaker)},
              {"text", turn.text},
              {"timestamp", turn.timestamp}};
}

Turn TurnFromJson(const Json& json) {
  Turn turn;
  auto speaker = ParseSpeaker(json.at("speaker").get<std::string>());
  if (!speaker) throw std::invalid_argument("bad speaker in turn record");
  turn.speaker = *speaker;
  turn.text = json.at("text").get<std::string>();
  turn.timestamp = json.at("timestamp").get<std::int64_t>();
  turn.turn_index = json.at("turn_index").get<std::size_t>();
  return turn;
}

Json CandidateToJson(const Candidate& candidate) {
  Json json{{"text", candidate.text},
            {"generator", GeneratorName(candidate.generator)},
            {"priority_tier", candidate.priority_tier},
            {"rule_rank", candidate.rule_rank},
            {"margin", nullptr},
            {"template_id", candidate.template_id}};
  if (candidate.margin) json["margin"] = *candidate.margin;
  return json;
}

Candidate CandidateFromJson(const Json& json) {
  Candidate candidate;
  candidate.text = json.at("text").get<std::string>();
  candidate.generator = GeneratorFromJson(json.at("generator"));
  candidate.priority_tier = json.at("priority_tier").get<int>();
  candidate.rule_rank = json.at("rule_rank").get<int>();
  if (json.contains("margin") && !json["margin"].is_null()) {
    candidate.margin = json["margin"].get<double>();
  }
  candidate.template_id = json.value("template_id", std::string());
  return candidate;
}

Json TraceToJson(const Trace& trace) {
  Json candidates = Json::array();
  for (const TraceCandidate& item : trace.candidates) {
    Json c = CandidateToJson(item.candidate);
    c["filtered"] = item.filtered;
    candidates.push_back(std::move(c));
  }
  Json topics = Json::object();
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    topics[std::string(kTopicNames[i])] = trace.topic_distribution[i];
  }
  Json json{{"latency_ms", trace.latency_ms},
            {"matched_template_ids", trace.matched_template_ids},
            {"candidates", std::move(candidates)},
            {"chosen_generator", nullptr},
            {"topic_distribution", std::move(topics)},
            {"resolved_input", trace.resolved_input}};
  if (trace.chosen_generator) {
    json["chosen_generator"] = GeneratorName(*trace.chosen_generator);
  }
  return json;
}

Trace TraceFromJson(const Json& json) {
  Trace trace;
  trace.latency_ms = json.at("latency_ms").get<std::map<std::string, double>>();
  trace.matched_template_ids =
      json.at("matched_template_ids").get<std::vector<std::string>>();
  for (const Json& c : json.at("candidates")) {
    trace.candidates.push_back(
        TraceCandidate{CandidateFromJson(c), c.at("filtered").get<bool>()});
  }
  const Json& chosen = json.at("chosen_generator");
  if (!chosen.is_null()) trace.chosen_generator = GeneratorFromJson(chosen);
  const Json& topics = json.at("topic_distribution");
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    trace.topic_distribution[i] = topics.at(std::string(kTopicNames[i])).get<double>();
  }
  trace.resolved_input = json.at("resolved_input").get<std::string>();
  return trace;
}

Json SessionToJson(const Session& session) {
  Json turns = Json::array();
  for (const Turn& turn : session.turns) {
    turns.push_back(Json{{"turn_index", turn.turn_index},
                         {"speaker", SpeakerName(turn.speaker)},
                         {"text", turn.text},
                         {"timestamp", turn.timestamp}});
  }
  Json json{{"session_id", session.id},
            {"created_at", session.created_at},
            {"turns", std::move(turns)}};
  if (session.rating) json["rating"] = *session.rating;
  return json;
}

std::string EncodeTraceRecord(const TraceRecord& record) {
  Json json = TraceToJson(record.trace);
  json["session_id"] = record.session_id;
  return json.dump();
}

TraceRecord DecodeTraceRecord(std::string_view line) {
  Json json = Json::parse(line);
  return TraceRecord{json.at("session_id").get<std::string>(), TraceFromJson(json)};
}

void ApplyTranscriptLine(std::string_view line, Session& session) {
  Json json = Json::parse(line);
  const std::string record = json.at("record").get<std::string>();
  session.id = json.at("session_id").get<std::string>();
  if (record == "session") {
    session.created_at = json.at("created_at").get<std::int64_t>();
  } else if (record == "turn") {
    Turn turn = TurnFromJson(json);
    if (turn.turn_index != session.turns.size()) {
      throw std::runtime_error("transcript turn_index out of sequence in " +
                               session.id);
    }
    session.turns.push_back(std::move(turn));
  } else if (record == "rating") {
    session.rating = json.at("rating").get<int>();
  } else {
    throw std::runtime_error("unknown transcript record type: " + record);
  }
}

}  // namespace parley
