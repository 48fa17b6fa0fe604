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


#include "parley/pipeline.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "parley/codec.h"
#include "parley/config.h"
#include "pipeline_fixture.h"
#include "test_util.h"

namespace parley {
namespace {

using testing::Harness;
using testing::ShippedConfig;
using testing::ShippedResources;

bool HasStage(const Trace& trace, Generator g) {
  return trace.latency_ms.contains(std::string(GeneratorName(g)));
}

void CheckTraceInvariants(const Trace& trace) {
  for (const auto& [stage, ms] : trace.latency_ms) CHECK(ms >= 0.0);
  CHECK(trace.latency_ms.contains("total"));
  const double sum = std::accumulate(trace.topic_distribution.begin(),
                                     trace.topic_distribution.end(), 0.0);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  if (trace.chosen_generator) {
    CHECK(std::any_of(trace.candidates.begin(), trace.candidates.end(), [&](const auto& c) {
      return !c.filtered && c.candidate.generator == *trace.chosen_generator;
    }));
  }
}

TEST_CASE("backstory question") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  const Reply reply = h.pipeline.Respond(id, "how old are you");
  CHECK(reply.trace.chosen_generator == Generator::kBackstory);
  CHECK(reply.text.find("nine") != std::string::npos);
  CheckTraceInvariants(reply.trace);
}

TEST_CASE("rush hour template end to end") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  const Reply reply =
      h.pipeline.Respond(id, "I think Rush Hour is the best action movie I've ever seen");
  CHECK(reply.text ==
        "Last night I had a dream that I was Jackie Chan... So... I think I need to take a "
        "break from watching Rush Hour");
  CHECK(reply.trace.chosen_generator == Generator::kEntityTemplate);
  CHECK_FALSE(HasStage(reply.trace, Generator::kRetrieval));
  CHECK_FALSE(HasStage(reply.trace, Generator::kNeural));
  CHECK(reply.trace.matched_template_ids.size() == 1);
  CheckTraceInvariants(reply.trace);
}

TEST_CASE("intent adoption skips tier three") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  const Reply reply = h.pipeline.Respond(id, "hello");
  CHECK(reply.trace.chosen_generator == Generator::kIntent);
  CHECK_FALSE(HasStage(reply.trace, Generator::kRetrieval));
  CHECK_FALSE(HasStage(reply.trace, Generator::kNeural));
  CHECK(reply.text.ends_with("What would you like to talk about today?"));
  // The same input would have produced neural candidates.
  CHECK_FALSE(NeuralReply(ShippedResources().seq2seq, TopicDistribution::Uniform(), "hello", 1)
                  .empty());
}

TEST_CASE("pronoun resolution feeds the fact store") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  h.pipeline.Respond(id, "Do you know France?");
  const Reply reply = h.pipeline.Respond(id, "What is the capital of it?");
  CHECK(reply.trace.resolved_input == "What is the capital of France?");
  CHECK(reply.trace.chosen_generator == Generator::kQa);
  CHECK(reply.text == "Paris.");
}

TEST_CASE("tier three gathers retrieval and neural candidates") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  const Reply reply = h.pipeline.Respond(id, "How did Neil Gorsuch do in his confirmation hearings?");
  CHECK(HasStage(reply.trace, Generator::kRetrieval));
  CHECK(HasStage(reply.trace, Generator::kNeural));
  CHECK(std::any_of(reply.trace.candidates.begin(), reply.trace.candidates.end(),
                    [](const auto& c) { return c.candidate.generator == Generator::kRetrieval; }));
  for (const auto& c : reply.trace.candidates) CHECK(c.candidate.margin.has_value());
  REQUIRE(reply.trace.chosen_generator.has_value());
  CHECK(PriorityTier(*reply.trace.chosen_generator) == 3);
  CheckTraceInvariants(reply.trace);
}

TEST_CASE("gibberish is never met with silence") {
  PipelineResources resources = ShippedResources();
  resources.corpus = CorpusIndex();
  Harness h(ShippedConfig(), resources);
  const std::string id = h.pipeline.CreateSession().id;
  const Reply reply = h.pipeline.Respond(id, "zxqv blorf wibble");
  CHECK_FALSE(reply.text.empty());

  PipelineResources bare = ShippedResources();
  bare.corpus = CorpusIndex();
  bare.seq2seq.clear();
  Harness fallback(ShippedConfig(), bare);
  const std::string other = fallback.pipeline.CreateSession().id;
  const Reply silent = fallback.pipeline.Respond(other, "zxqv blorf wibble");
  CHECK(silent.text == ShippedConfig().fallback_line);
  CHECK_FALSE(silent.trace.chosen_generator.has_value());
}

TEST_CASE("each respond adds two turns and one trace") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  const std::vector<std::string> inputs = {"hi", "how old are you", "tell me about Paris",
                                           "zzz qqq", "thanks"};
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    h.clock.Advance(5);
    const Reply reply = h.pipeline.Respond(id, inputs[i]);
    const Session session = *h.store.Get(id);
    REQUIRE(session.turns.size() == 2 * (i + 1));
    CHECK(session.turns[2 * i].text == inputs[i]);
    CHECK(session.turns[2 * i + 1].text == reply.text);
    CHECK(session.turns[2 * i + 1].speaker == Speaker::kBot);
    CHECK(h.store.Traces().size() == i + 1);
    CHECK(h.store.Traces().back().trace == reply.trace);
    CheckTraceInvariants(reply.trace);
  }
}

TEST_CASE("respond errors") {
  Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  CHECK_THROWS_AS(h.pipeline.Respond("nope", "hi"), std::out_of_range);
  CHECK_THROWS_AS(h.pipeline.Respond(id, ""), std::invalid_argument);
  CHECK_THROWS_AS(h.pipeline.Respond(id, "   "), std::invalid_argument);
  CHECK(h.store.Get(id)->turns.empty());
}

std::vector<std::string> Script() {
  return {"hello", "Do you know France?", "What is the capital of it?",
          "I think Rush Hour is the best action movie I've ever seen",
          "How did Neil Gorsuch do in his confirmation hearings?", "what do you think about cats",
          "how old are you", "zxqv blorf", "bye"};
}

// Runs the script twice in one session per run and returns all log bytes.
std::string RunScript(const std::filesystem::path& dir) {
  Harness h(ShippedConfig(), ShippedResources(), dir);
  const std::string a = h.pipeline.CreateSession().id;
  const std::string b = h.pipeline.CreateSession().id;
  for (const std::string& text : Script()) {
    h.pipeline.Respond(a, text);
    h.clock.Advance(3);
    h.pipeline.Respond(b, text);
  }
  h.store.RecordRating(a, 4);
  return testing::Slurp(h.store.TranscriptPath(a)) + testing::Slurp(h.store.TranscriptPath(b)) +
         testing::Slurp(h.store.TraceLogPath());
}

TEST_CASE("runs are byte-identical") {
  testing::TempDir first;
  testing::TempDir second;
  const std::string one = RunScript(first.path());
  const std::string two = RunScript(second.path());
  CHECK(one.size() > 1000);
  CHECK(one == two);
}

TEST_CASE("concurrent sessions stay consistent") {
  Harness h;
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(h.pipeline.CreateSession().id);
  std::vector<std::thread> workers;
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([&, w] {
      const std::string& id = ids[static_cast<std::size_t>(w % 4)];
      for (int i = 0; i < 5; ++i) h.pipeline.Respond(id, i % 2 == 0 ? "hello" : "how old are you");
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::string& id : ids) {
    const Session s = *h.store.Get(id);
    REQUIRE(s.turns.size() == 20);
    for (std::size_t i = 0; i < s.turns.size(); ++i) {
      CHECK(s.turns[i].turn_index == i);
      CHECK(s.turns[i].speaker == (i % 2 == 0 ? Speaker::kUser : Speaker::kBot));
    }
  }
  CHECK(h.store.Traces().size() == 40);
}

TEST_CASE("manual clock") {
  ManualClock clock(10);
  clock.Advance(5);
  CHECK(clock.NowSeconds() == 15);
  clock.Set(3);
  CHECK(clock.NowSeconds() == 3);
  CHECK(clock.MonotonicMillis() == 0.0);
  SystemClock system;
  const double a = system.MonotonicMillis();
  CHECK(system.MonotonicMillis() >= a);
  CHECK(system.NowSeconds() > 1700000000);
}

}  // namespace
}  // namespace parley
