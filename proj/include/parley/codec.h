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

#ifndef PARLEY_CODEC_H_
#define PARLEY_CODEC_H_

// Line-oriented JSON encoding for transcripts and traces.
//
// Transcript lines carry a "record" discriminator:
//   {"record":"session","session_id":...,"created_at":...}
//   {"record":"turn","session_id":...,"turn_index":...,"speaker":"user"|"bot",
//    "text":...,"timestamp":...}
//   {"record":"rating","session_id":...,"rating":...}
// Trace lines:
//   {"session_id":...,"latency_ms":{stage:ms},"matched_template_ids":[...],
//    "candidates":[{"text","generator","priority_tier","rule_rank","margin",
//                   "template_id","filtered"}],
//    "chosen_generator":name|null,"topic_distribution":{topic:p},
//    "resolved_input":...}

#include <string>
#include <string_view>

#include "json.hpp"
#include "parley/session.h"

namespace parley {

using Json = nlohmann::json;

Json TurnToJson(const std::string& session_id, const Turn& turn);
Turn TurnFromJson(const Json& json);

Json CandidateToJson(const Candidate& candidate);
Candidate CandidateFromJson(const Json& json);

Json TraceToJson(const Trace& trace);
Trace TraceFromJson(const Json& json);

Json SessionToJson(const Session& session);

std::string EncodeTraceRecord(const TraceRecord& record);
TraceRecord DecodeTraceRecord(std::string_view line);

// Applies one transcript line to a session being rebuilt.
void ApplyTranscriptLine(std::string_view line, Session& session);

}  // namespace parley

#endif  // PARLEY_CODEC_H_
