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


#include "parley/session.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "parley/codec.h"
#include "parley/text.h"
#include "test_util.h"

namespace parley {
namespace {

Trace SampleTrace() {
  Trace trace;
  trace.latency_ms = {{"context", 0.25}, {"nlu", 1.5}, {"total", 3.125}};
  trace.matched_template_ids = {"greeting#0"};
  Candidate intent = Candidate::Make("Hi there! How are you?", Generator::kIntent, "greeting#0");
  Candidate neural = Candidate::Make("hello", Generator::kNeural);
  neural.margin = -0.375;
  trace.candidates = {{intent, false}, {neural, true}};
  trace.chosen_generator = Generator::kIntent;
  trace.topic_distribution = {0.1, 0.2, 0.3, 0.1, 0.2, 0.1};
  trace.resolved_input = "hi \"there\"\n";
  return trace;
}

TEST_CASE("create_session starts empty and unrated") {
  const Session s = CreateSession("a", 100);
  CHECK(s.id == "a");
  CHECK(s.turns.empty());
  CHECK_FALSE(s.rating.has_value());
  CHECK(s.created_at == 100);
}

TEST_CASE("store hands out distinct ids") {
  SessionStore store;
  const Session a = store.Create(5);
  const Session b = store.Create(5);
  CHECK(a.id != b.id);
  CHECK(store.Contains(a.id));
  CHECK(store.ListIds().size() == 2);
}

TEST_CASE("append_turn numbers turns from zero") {
  Session s = CreateSession("a", 0);
  CHECK(AppendTurn(s, Speaker::kUser, "hi", 1).turn_index == 0);
  AppendTurn(s, Speaker::kBot, "hello", 1);
  AppendTurn(s, Speaker::kUser, "how are you", 2);
  const Turn t = AppendTurn(s, Speaker::kBot, "fine", 2);
  CHECK(t.turn_index == 3);
  CHECK(t.speaker == Speaker::kBot);
  CHECK_THROWS_AS(AppendTurn(s, Speaker::kUser, "", 3), std::invalid_argument);
}

TEST_CASE("recent_turns returns a suffix") {
  Session s = CreateSession("a", 0);
  CHECK(RecentTurns(s, 5).empty());
  for (int i = 0; i < 7; ++i) AppendTurn(s, Speaker::kUser, "t" + std::to_string(i), i);
  const auto recent = RecentTurns(s, 5);
  REQUIRE(recent.size() == 5);
  CHECK(recent.front().turn_index == 2);
  CHECK(recent.back().turn_index == 6);

  Session short_session = CreateSession("b", 0);
  for (int i = 0; i < 3; ++i) AppendTurn(short_session, Speaker::kUser, "x", i);
  CHECK(RecentTurns(short_session, 5).size() == 3);

  for (std::size_t n = 0; n <= 9; ++n) {
    const auto suffix = RecentTurns(s, n);
    REQUIRE(suffix.size() <= s.turns.size());
    CHECK(std::equal(suffix.begin(), suffix.end(), s.turns.end() - static_cast<long>(suffix.size())));
  }
}

TEST_CASE("record_rating validates and overwrites") {
  Session s = CreateSession("a", 0);
  RecordRating(s, 3);
  CHECK(s.rating == 3);
  CHECK_THROWS_AS(RecordRating(s, 6), std::invalid_argument);
  CHECK_THROWS_AS(RecordRating(s, 0), std::invalid_argument);
  RecordRating(s, 2);
  RecordRating(s, 4);
  CHECK(s.rating == 4);
}

TEST_CASE("generator tiers and ranks") {
  CHECK(PriorityTier(Generator::kIntent) == 1);
  CHECK(PriorityTier(Generator::kBackstory) == 1);
  CHECK(PriorityTier(Generator::kEntityTemplate) == 1);
  CHECK(PriorityTier(Generator::kQa) == 2);
  CHECK(PriorityTier(Generator::kRetrieval) == 3);
  CHECK(PriorityTier(Generator::kNeural) == 3);
  CHECK(RuleRank(Generator::kIntent) == 1);
  CHECK(RuleRank(Generator::kBackstory) == 2);
  CHECK(RuleRank(Generator::kEntityTemplate) == 3);
  for (Generator g : kAllGenerators) {
    CHECK(ParseGenerator(GeneratorName(g)) == g);
    const Candidate c = Candidate::Make("x", g);
    CHECK(c.priority_tier == PriorityTier(g));
  }
  CHECK_FALSE(ParseGenerator("oracle").has_value());
}

TEST_CASE("trace codec round-trips") {
  const Trace trace = SampleTrace();
  CHECK(TraceFromJson(TraceToJson(trace)) == trace);

  Trace empty;
  CHECK(TraceFromJson(TraceToJson(empty)) == empty);

  const TraceRecord record{"s1", trace};
  const std::string line = EncodeTraceRecord(record);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(DecodeTraceRecord(line) == record);
}

TEST_CASE("turn codec round-trips") {
  const Turn turn{Speaker::kBot, "caf\xC3\xA9 \"quoted\"", 17, 4};
  CHECK(TurnFromJson(TurnToJson("s", turn)) == turn);
}

TEST_CASE("persistent store writes one trace line per log call") {
  testing::TempDir dir;
  std::string id;
  {
    SessionStore store(dir.path());
    id = store.Create(10).id;
    store.AppendTurn(id, Speaker::kUser, "hi", 11);
    store.AppendTurn(id, Speaker::kBot, "hello", 11);
    store.RecordRating(id, 2);
    store.RecordRating(id, 5);
    store.LogTrace(id, SampleTrace());
    store.LogTrace(id, Trace{});
    store.LogTrace(id, SampleTrace());
  }
  const auto lines = ReadLines(dir.path() / "traces.jsonl");
  CHECK(lines.size() == 3);
  CHECK(DecodeTraceRecord(lines[1]).trace == Trace{});

  const auto traces = LoadTraces(dir.path());
  REQUIRE(traces.size() == 3);
  CHECK(traces[0].trace == SampleTrace());

  SessionStore reopened(dir.path());
  const auto session = reopened.Get(id);
  REQUIRE(session.has_value());
  CHECK(session->turns.size() == 2);
  CHECK(session->turns[1].text == "hello");
  CHECK(session->rating == 5);
  CHECK(session->created_at == 10);
  CHECK(reopened.Traces().size() == 3);

  const Session next = reopened.Create(10);
  CHECK(next.id != id);
}

TEST_CASE("unknown session is out_of_range") {
  SessionStore store;
  CHECK_THROWS_AS(store.AppendTurn("nope", Speaker::kUser, "hi", 0), std::out_of_range);
  CHECK_FALSE(store.Get("nope").has_value());
}

}  // namespace
}  // namespace parley
