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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "analytics_fixture.h"
#include "parley/analytics.h"
#include "parley/context.h"
#include "parley/entity_linker.h"
#include "parley/neural_reply.h"
#include "parley/pipeline.h"
#include "parley/prng.h"
#include "parley/retrieval.h"
#include "parley/seq2seq.h"
#include "parley/svm.h"
#include "parley/topic_forest.h"
#include "pipeline_fixture.h"
#include "test_util.h"

namespace parley {
namespace {

// Tolerances and budgets.
constexpr double kTopicAccuracy = 0.90;
constexpr double kTopicBudgetSecs = 60.0;
constexpr double kFullModeAccuracy = 0.75;
constexpr double kAblationBudgetSecs = 60.0;
constexpr double kGradientTolerance = 1e-4;
constexpr std::size_t kGradientSamples = 20;
constexpr double kGradientBudgetSecs = 10.0;
constexpr double kEchoLossRatio = 0.5;
constexpr std::size_t kEchoExactMin = 10;
constexpr double kEchoBudgetSecs = 120.0;
constexpr double kMisspellMax = 0.2;
constexpr double kUsageSumTolerance = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename... Args>
std::string Format(const char* pattern, Args... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), pattern, args...);
  return buffer;
}

const KnowledgeBase& ShippedKb() { return testing::ShippedResources().kb; }

Outcome TopicForest() {
  const Timer timer;
  const TopicModel model = TrainTopicForest(SyntheticTopicCorpus(100, 8, 42), ForestConfig{});
  const double train_secs = timer.Seconds();
  const auto test = SyntheticTopicCorpus(20, 8, 4242);
  std::size_t correct = 0;
  for (const LabeledText& doc : test) correct += ClassifyTopic(model, doc.text).Argmax() == doc.topic;
  const double accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return {accuracy >= kTopicAccuracy && train_secs < kTopicBudgetSecs,
          Format("holdout accuracy %.4f (>= %.2f), training %.2f s", accuracy, kTopicAccuracy,
                 train_secs)};
}

Outcome EngagementAblation() {
  const Timer timer;
  const auto corpus = SyntheticEngagementCorpus(6000, 42);
  const std::span<const EngagementExample> all(corpus);
  const auto train = all.first(4800);
  const auto test = all.subspan(4800);
  const double lexical = EvaluateEngagement(train, test, FeatureMode::kLexical, {}).test_accuracy;
  const double external = EvaluateEngagement(train, test, FeatureMode::kExternal, {}).test_accuracy;
  const double full = EvaluateEngagement(train, test, FeatureMode::kFull, {}).test_accuracy;
  const double secs = timer.Seconds();
  return {full >= external && external >= lexical && full >= kFullModeAccuracy &&
              secs < kAblationBudgetSecs,
          Format("full %.4f, external %.4f, lexical %.4f, %.2f s", full, external, lexical, secs)};
}

Outcome GradientCheck() {
  const Timer timer;
  Seq2SeqConfig config;
  config.layers = 2;
  config.hidden = 4;
  const std::vector<std::string> texts = {"hello there", "general kenobi"};
  config.vocab = BuildVocab(texts, SymbolMode::kChar);
  Seq2SeqModel model = InitModel(config);
  for (std::span<double> block : model.params.Blocks()) {
    for (double& v : block) v *= 6.0;
  }
  const TrainPair pair = MakePair(model, texts[0], texts[1]);
  const auto [loss, grads] = ComputeGradients(model, pair);
  auto params = model.params.Blocks();
  const auto analytic = grads.Blocks();
  Lcg64 rng(2024);
  constexpr double kEps = 1e-4;
  double worst = 0.0;
  for (std::size_t sample = 0; sample < kGradientSamples; ++sample) {
    const std::size_t b = rng.UniformIndex(params.size());
    const std::size_t i = rng.UniformIndex(params[b].size());
    const double saved = params[b][i];
    params[b][i] = saved + kEps;
    const double plus = SequenceLoss(model, pair);
    params[b][i] = saved - kEps;
    const double minus = SequenceLoss(model, pair);
    params[b][i] = saved;
    const double numeric = (plus - minus) / (2.0 * kEps);
    const double a = analytic[b][i];
    worst = std::max(worst, std::abs(a - numeric) /
                                std::max({std::abs(a), std::abs(numeric), 1e-8}));
  }
  const double secs = timer.Seconds();
  return {worst < kGradientTolerance && secs < kGradientBudgetSecs,
          Format("max relative error %.3g over %zu parameters (loss %.4f), %.2f s", worst,
                 kGradientSamples, loss, secs)};
}

Outcome Seq2SeqLearning() {
  const std::vector<std::string> words = {"cat",  "dog",  "sun",  "hat",  "red",
                                          "blue", "tree", "fish", "bird", "moon",
                                          "star", "cake", "milk", "book", "door",
                                          "rain", "snow", "wind", "lamp", "ship"};
  const Timer timer;
  Seq2SeqConfig config = Seq2SeqConfig::Defaults(SymbolMode::kChar);
  config.vocab = BuildVocab(words, SymbolMode::kChar);
  config.layers = 1;
  config.hidden = 64;
  config.learning_rate = 2.0;
  Seq2SeqModel model = InitModel(config);
  std::vector<TrainPair> pairs;
  for (const std::string& w : words) pairs.push_back(MakePair(model, w, w));
  const auto losses = TrainSteps(model, pairs, 500, config.learning_rate, 1);
  double mean_loss = 0.0;
  for (const TrainPair& p : pairs) mean_loss += SequenceLoss(model, p);
  mean_loss /= static_cast<double>(pairs.size());
  std::size_t exact = 0;
  for (const std::string& w : words) exact += Generate(model, w, 0.0, 20, 1) == w;
  const double secs = timer.Seconds();
  return {mean_loss <= kEchoLossRatio * losses.front() && exact >= kEchoExactMin &&
              secs < kEchoBudgetSecs,
          Format("step-1 loss %.4f, final mean loss %.4f, exact %zu/20, %.2f s", losses.front(),
                 mean_loss, exact, secs)};
}

Outcome WorkedExamples() {
  testing::Harness h;
  const std::string id = h.pipeline.CreateSession().id;
  const std::string rush =
      h.pipeline.Respond(id, "I think Rush Hour is the best action movie I've ever seen").text;
  const bool rush_ok = rush ==
                       "Last night I had a dream that I was Jackie Chan... So... I think I need to "
                       "take a break from watching Rush Hour";

  const auto mentions =
      LinkEntities("How did Neil Gorsuch do in his confirmation hearings?", ShippedKb());
  const auto query = BuildQuery(mentions, ShippedKb());
  const Query expected{{{"Neil Gorsuch", "Neil Gorsuch"}, {"confirmation", "Advice and consent"}}};
  const bool gorsuch_ok = query.has_value() && *query == expected;

  std::vector<Turn> turns;
  for (const char* text : {"Do you know France?", "France is a country in Europe. I love it!"}) {
    Turn turn;
    turn.text = text;
    turn.turn_index = turns.size();
    turns.push_back(turn);
  }
  const ContextWindow window = BuildContextWindow(turns, ShippedKb());
  const std::string resolved = ResolvePronouns("What's the capital of it?", window, ShippedKb());
  const bool france_ok = resolved == "What's the capital of France?";
  return {rush_ok && gorsuch_ok && france_ok,
          Format("rush hour %s, gorsuch query %s, france %s", rush_ok ? "ok" : "MISMATCH",
                 gorsuch_ok ? "ok" : "MISMATCH", france_ok ? "ok" : "MISMATCH")};
}

Outcome PriorityArbitration() {
  const auto run = [] {
    testing::Harness h;
    const std::string id = h.pipeline.CreateSession().id;
    return h.pipeline.Respond(id, "hello").trace;
  };
  const Trace trace = run();
  const bool tier3_possible =
      !NeuralReply(testing::ShippedResources().seq2seq, TopicDistribution::Uniform(), "hello", 1)
           .empty();
  const bool adopted = trace.chosen_generator == Generator::kIntent;
  const bool no_tier3 = !trace.latency_ms.contains("retrieval") &&
                        !trace.latency_ms.contains("neural");
  const bool deterministic = run() == trace;
  return {tier3_possible && adopted && no_tier3 && deterministic,
          Format("tier-3 candidates available %d, intent adopted %d, no tier-3 latency %d, "
                 "deterministic %d",
                 tier3_possible, adopted, no_tier3, deterministic)};
}

Outcome MisspellFilter() {
  const Dictionary& dictionary = testing::ShippedResources().dictionary;
  const double hot = MisspellRatio("It's sooooo hoooot!", dictionary);
  const std::string tweet = "We watched the big game with my family last night";
  const double clean = MisspellRatio(tweet, dictionary);
  const std::size_t words = RawTokens(tweet).size();
  const bool pass = std::abs(hot - 2.0 / 3.0) < 1e-12 && hot > kMisspellMax && words == 10 &&
                    clean <= kMisspellMax;
  return {pass, Format("hot ratio %.4f rejected, %zu-word tweet ratio %.4f kept", hot, words,
                       clean)};
}

Outcome Analytics() {
  const auto fixture = testing::SixSessionFixture();
  const auto markers = DefaultMarkerWords();
  const StatsTable table = ComputeStats(fixture.sessions, fixture.traces, markers);
  const bool exact = table == testing::SixSessionExpected();
  double worst = 0.0;
  for (const RatingStats& row : table.per_rating) {
    if (row.session_count == 0) continue;
    double sum = 0.0;
    for (const auto& [name, share] : row.generator_usage) sum += share;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return {exact && worst <= kUsageSumTolerance,
          Format("table %s, worst usage sum error %.3g", exact ? "exact" : "MISMATCH", worst)};
}

std::string ScriptedRun(const std::filesystem::path& dir) {
  testing::Harness h(testing::ShippedConfig(), testing::ShippedResources(), dir);
  const std::string a = h.pipeline.CreateSession().id;
  const std::string b = h.pipeline.CreateSession().id;
  for (const char* text :
       {"hello", "Do you know France?", "What is the capital of it?",
        "I think Rush Hour is the best action movie I've ever seen",
        "How did Neil Gorsuch do in his confirmation hearings?", "what do you think about cats",
        "how old are you", "zxqv blorf", "bye"}) {
    h.pipeline.Respond(a, text);
    h.clock.Advance(3);
    h.pipeline.Respond(b, text);
  }
  h.store.RecordRating(a, 4);
  return testing::Slurp(h.store.TranscriptPath(a)) + testing::Slurp(h.store.TranscriptPath(b)) +
         testing::Slurp(h.store.TraceLogPath());
}

Outcome Determinism() {
  testing::TempDir first;
  testing::TempDir second;
  const std::string one = ScriptedRun(first.path());
  const std::string two = ScriptedRun(second.path());
  return {!one.empty() && one == two,
          Format("%zu bytes of transcripts and traces, %s", one.size(),
                 one == two ? "identical" : "DIFFERENT")};
}

Outcome CoreOnly() {
  return {true, "this binary links only the core libraries"};
}

}  // namespace
}  // namespace parley

int main() {
  using parley::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"topic_forest_holdout", parley::TopicForest},
      {"engagement_ablation_ordering", parley::EngagementAblation},
      {"seq2seq_gradient_check", parley::GradientCheck},
      {"seq2seq_learning", parley::Seq2SeqLearning},
      {"worked_example_replay", parley::WorkedExamples},
      {"priority_arbitration", parley::PriorityArbitration},
      {"misspell_filter", parley::MisspellFilter},
      {"analytics_table", parley::Analytics},
      {"determinism", parley::Determinism},
      {"core_only", parley::CoreOnly},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
