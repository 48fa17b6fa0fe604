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
#include <filesystem>
#include <stdexcept>

#include "parley/context.h"
#include "parley/entity_linker.h"
#include "parley/prng.h"
#include "parley/rules.h"
#include "parley/text.h"

namespace parley {

namespace {

template <typename Fn>
auto Timed(Clock& clock, Trace& trace, std::string_view stage, Fn&& fn) {
  const double start = clock.MonotonicMillis();
  auto result = fn();
  trace.latency_ms[std::string(stage)] += clock.MonotonicMillis() - start;
  return result;
}

std::string_view Stage(Generator generator) { return GeneratorName(generator); }

}  // namespace

std::int64_t SystemClock::NowSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

double SystemClock::MonotonicMillis() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::int64_t ManualClock::NowSeconds() {
  std::lock_guard<std::mutex> lock(mu_);
  return now_;
}

double ManualClock::MonotonicMillis() { return 0.0; }

void ManualClock::Set(std::int64_t now) {
  std::lock_guard<std::mutex> lock(mu_);
  now_ = now;
}

void ManualClock::Advance(std::int64_t secs) {
  std::lock_guard<std::mutex> lock(mu_);
  now_ += secs;
}

PipelineResources LoadResources(const PipelineConfig& config) {
  for (const std::filesystem::path& file : ReferencedFiles(config)) {
    if (file.empty()) throw std::runtime_error("config is missing a required file path");
    if (!std::filesystem::exists(file)) {
      throw std::runtime_error("missing file: " + file.string());
    }
  }
  PipelineResources r;
  r.intents = LoadIntents(config.intents_path);
  r.backstory = LoadBackstory(config.backstory_path);
  r.kb = LoadKnowledgeBase(config.kb_path);
  r.templates = LoadTemplates(config.templates_path);
  r.facts = LoadFacts(config.facts_path, r.kb);
  r.corpus = CorpusIndex(LoadCorpus(config.corpus_path));
  r.dictionary = LoadDictionary(config.dictionary_path);
  r.filter.blocklist = LoadBlocklist(config.blocklist_path);
  r.filter.min_tokens = config.min_reply_tokens;
  r.filter.max_chars = config.max_reply_chars;
  r.filter.max_repeat_ratio = config.max_repeat_ratio;
  r.topic_model = LoadTopicModel(config.topic_model_path);
  if (!config.engagement_model_path.empty()) {
    r.engagement_model = LoadSvm(config.engagement_model_path);
    if (r.engagement_model->dim != kEngagementDim) {
      throw std::runtime_error("engagement model has the wrong dimension");
    }
  }
  for (const auto& [topic, path] : config.seq2seq_paths) r.seq2seq[topic] = LoadSeq2Seq(path);
  return r;
}

Pipeline::Pipeline(PipelineConfig config, PipelineResources resources, SessionStore& store,
                   Clock& clock)
    : config_(std::move(config)), resources_(std::move(resources)), store_(store), clock_(clock) {
  if (!resources_.seq2seq.empty() && !resources_.seq2seq.contains(Topic::kGeneral)) {
    throw std::invalid_argument("seq2seq models need a General model");
  }
}

Session Pipeline::CreateSession() { return store_.Create(clock_.NowSeconds()); }

Reply Pipeline::Respond(const std::string& session_id, std::string_view user_text) {
  if (Trim(user_text).empty()) throw std::invalid_argument("message text must be nonempty");
  return store_.WithSessionLock(session_id,
                                [&] { return RespondLocked(session_id, user_text); });
}

void Pipeline::RecordTopic(const std::string& session_id, const TopicDistribution& raw,
                           const TopicDistribution& smoothed) {
  std::lock_guard<std::mutex> lock(topics_mu_);
  TopicState& state = topics_[session_id];
  state.history.push_back(raw);
  while (state.history.size() > kContextTurns) state.history.pop_front();
  state.last_smoothed = smoothed;
}

Reply Pipeline::RespondLocked(const std::string& session_id, std::string_view user_text) {
  const PipelineResources& r = resources_;
  const double started = clock_.MonotonicMillis();
  const std::int64_t now = clock_.NowSeconds();

  const std::optional<Session> session = store_.Get(session_id);
  if (!session) throw std::out_of_range("unknown session: " + session_id);
  const std::vector<Turn> window_turns = RecentTurns(*session, kContextTurns);
  const Turn user_turn = store_.AppendTurn(session_id, Speaker::kUser, user_text, now);

  const std::uint64_t turn_seed =
      MixSeed(MixSeed(config_.seed, Fnv1a64(session_id)), user_turn.turn_index);
  const auto seed_for = [turn_seed](Generator g) {
    return MixSeed(turn_seed, static_cast<std::uint64_t>(g));
  };

  Trace trace;
  trace.resolved_input = Timed(clock_, trace, kStageContext, [&] {
    const ContextWindow window = BuildContextWindow(window_turns, r.kb, config_.entity_threshold);
    return ResolvePronouns(user_text, window, r.kb);
  });
  const std::string input = trace.resolved_input;

  struct Understanding {
    std::optional<IntentMatch> intent;
    std::vector<EntityMention> mentions;
    TopicDistribution topics;
  };
  const Understanding nlu = Timed(clock_, trace, kStageNlu, [&] {
    Understanding u;
    u.intent = MatchIntent(input, r.intents, config_.intent_threshold);
    u.mentions = LinkEntities(input, r.kb, config_.entity_threshold);
    std::optional<TopicDistribution> prior;
    std::deque<TopicDistribution> history;
    {
      std::lock_guard<std::mutex> lock(topics_mu_);
      const TopicState& state = topics_[session_id];
      prior = state.last_smoothed;
      history = state.history;
    }
    const TopicDistribution raw = ClassifyTopic(r.topic_model, input, prior);
    const std::vector<TopicDistribution> past(history.begin(), history.end());
    u.topics = SmoothTopics(past, raw);
    RecordTopic(session_id, raw, u.topics);
    return u;
  });
  trace.topic_distribution = nlu.topics.probabilities;

  std::optional<Candidate> chosen;
  // Records a tier-1 or tier-2 candidate and adopts it if it passes the filter.
  const auto consider = [&](std::optional<Candidate> candidate) {
    if (!candidate) return;
    const bool passes = PassesFilter(candidate->text, r.filter);
    if (!candidate->template_id.empty()) {
      trace.matched_template_ids.push_back(candidate->template_id);
    }
    trace.candidates.push_back({*candidate, !passes});
    if (passes) chosen = std::move(candidate);
  };

  if (nlu.intent) {
    const auto def = std::find_if(r.intents.begin(), r.intents.end(), [&](const IntentDef& d) {
      return d.id == nlu.intent->intent_id;
    });
    consider(Timed(clock_, trace, Stage(Generator::kIntent), [&] {
      return std::optional<Candidate>(IntentReply(*nlu.intent, *def, seed_for(Generator::kIntent)));
    }));
  }
  if (!chosen) {
    consider(Timed(clock_, trace, Stage(Generator::kBackstory), [&] {
      return BackstoryReply(input, r.backstory, config_.backstory_threshold,
                            seed_for(Generator::kBackstory));
    }));
  }
  if (!chosen) {
    consider(Timed(clock_, trace, Stage(Generator::kEntityTemplate), [&] {
      return EntityTemplateReply(nlu.mentions, r.kb, r.templates,
                                 seed_for(Generator::kEntityTemplate));
    }));
  }
  if (!chosen) {
    consider(Timed(clock_, trace, Stage(Generator::kQa), [&] {
      return QaAnswer(input, r.kb, r.facts, config_.entity_threshold);
    }));
  }

  if (!chosen) {
    std::vector<Candidate> pool;
    std::optional<Candidate> retrieved = Timed(clock_, trace, Stage(Generator::kRetrieval), [&] {
      RetrievalOptions options;
      options.search.k = config_.retrieval_k;
      options.search.window_secs = config_.retrieval_window_secs;
      options.max_misspell_ratio = config_.max_misspell_ratio;
      return RetrievalReply(nlu.mentions, r.kb, r.corpus, r.dictionary, now,
                            seed_for(Generator::kRetrieval), options);
    });
    if (retrieved) pool.push_back(std::move(*retrieved));
    if (!r.seq2seq.empty()) {
      std::vector<Candidate> generated = Timed(clock_, trace, Stage(Generator::kNeural), [&] {
        return NeuralReply(r.seq2seq, nlu.topics, input, seed_for(Generator::kNeural),
                           config_.neural_max_len);
      });
      for (Candidate& c : generated) pool.push_back(std::move(c));
    }
    chosen = Timed(clock_, trace, kStageSelection, [&] {
      std::vector<Candidate> kept;
      for (Candidate& c : pool) {
        if (r.engagement_model) c.margin = EngagementMargin(*r.engagement_model, c.text);
        const bool passes = PassesFilter(c.text, r.filter);
        trace.candidates.push_back({c, !passes});
        if (passes) kept.push_back(c);
      }
      return SelectReply(kept, r.engagement_model ? &*r.engagement_model : nullptr);
    });
  }

  std::string reply = config_.fallback_line;
  if (chosen) {
    trace.chosen_generator = chosen->generator;
    reply = chosen->text;
  }
  store_.AppendTurn(session_id, Speaker::kBot, reply, now);
  trace.latency_ms[std::string(kStageTotal)] = clock_.MonotonicMillis() - started;
  store_.LogTrace(session_id, trace);
  return Reply{std::move(reply), std::move(trace)};
}

}  // namespace parley
