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

#ifndef PARLEY_SESSION_H_
#define PARLEY_SESSION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace parley {

enum class Speaker { kUser, kBot };

std::string_view SpeakerName(Speaker speaker);
std::optional<Speaker> ParseSpeaker(std::string_view name);

// Reply generators, grouped into priority tiers:
//   tier 1 (rule):      intent, backstory, entity_template (in that rank order)
//   tier 2 (knowledge): qa
//   tier 3 (ensemble):  retrieval, neural
enum class Generator { kIntent, kBackstory, kEntityTemplate, kQa, kRetrieval, kNeural };

inline constexpr std::array<Generator, 6> kAllGenerators = {
    Generator::kIntent, Generator::kBackstory, Generator::kEntityTemplate,
    Generator::kQa,     Generator::kRetrieval, Generator::kNeural};

std::string_view GeneratorName(Generator generator);
std::optional<Generator> ParseGenerator(std::string_view name);
int PriorityTier(Generator generator);
// Order within tier 1; 0 for generators outside tier 1.
int RuleRank(Generator generator);

struct Turn {
  Speaker speaker = Speaker::kUser;
  std::string text;
  std::int64_t timestamp = 0;
  std::size_t turn_index = 0;

  bool operator==(const Turn&) const = default;
};

struct Session {
  std::string id;
  std::vector<Turn> turns;
  std::optional<int> rating;
  std::int64_t created_at = 0;

  bool operator==(const Session&) const = default;
};

struct Candidate {
  std::string text;
  Generator generator = Generator::kNeural;
  int priority_tier = 3;
  int rule_rank = 0;
  std::optional<double> margin;
  // Which template or record produced the text; empty for open generators.
  std::string template_id;

  static Candidate Make(std::string text, Generator generator,
                        std::string template_id = {});

  bool operator==(const Candidate&) const = default;
};

struct TraceCandidate {
  Candidate candidate;
  bool filtered = false;

  bool operator==(const TraceCandidate&) const = default;
};

using TopicVector = std::array<double, 6>;

// Per-turn record of what the pipeline did.
struct Trace {
  std::map<std::string, double> latency_ms;
  std::vector<std::string> matched_template_ids;
  std::vector<TraceCandidate> candidates;
  // Absent when no candidate survived and the fallback line was used.
  std::optional<Generator> chosen_generator;
  TopicVector topic_distribution{};
  std::string resolved_input;

  bool operator==(const Trace&) const = default;
};

struct TraceRecord {
  std::string session_id;
  Trace trace;

  bool operator==(const TraceRecord&) const = default;
};

// In-memory session operations. These validate but do not persist.
Session CreateSession(std::string id, std::int64_t now);
Turn AppendTurn(Session& session, Speaker speaker, std::string_view text,
                std::int64_t now);
// Last min(n, size) turns, oldest first.
std::vector<Turn> RecentTurns(const Session& session, std::size_t n = 5);
Session& RecordRating(Session& session, int rating);

// Thread-safe session registry with append-only persistence.
//
// Layout under the log directory:
//   sessions/<id>.jsonl   one record per line: session header, turns, ratings
//   traces.jsonl          one trace record per line, all sessions
//
// An empty directory path keeps everything in memory.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir = {});

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  Session Create(std::int64_t now);
  bool Contains(const std::string& id) const;
  // Snapshot of the session; nullopt if unknown.
  std::optional<Session> Get(const std::string& id) const;
  std::vector<std::string> ListIds() const;

  // Throws std::out_of_range for unknown sessions and std::invalid_argument
  // for empty text or a rating outside [1, 5].
  Turn AppendTurn(const std::string& id, Speaker speaker, std::string_view text,
                  std::int64_t now);
  void RecordRating(const std::string& id, int rating);

  void LogTrace(const std::string& session_id, const Trace& trace);

  // Snapshots of every session (ordered by id) and every logged trace
  // (in logging order, including traces loaded from disk).
  std::vector<Session> Sessions() const;
  std::vector<TraceRecord> Traces() const;

  // Runs fn with exclusive access to one session's append stream. Used to
  // serialize whole request pipelines per session.
  template <typename Fn>
  auto WithSessionLock(const std::string& id, Fn&& fn) {
    Entry& entry = Find(id);
    std::lock_guard<std::mutex> request_lock(entry.request_mu);
    return fn();
  }

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path TranscriptPath(const std::string& id) const;
  std::filesystem::path TraceLogPath() const;

 private:
  struct Entry {
    std::mutex request_mu;
    mutable std::mutex mu;
    Session session;
  };

  Entry& Find(const std::string& id) const;
  void AppendLine(const std::filesystem::path& path, const std::string& line);

  std::filesystem::path dir_;
  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::unique_ptr<Entry>> sessions_;
  std::uint64_t next_sequence_ = 0;
  mutable std::mutex trace_mu_;
  std::vector<TraceRecord> traces_;
};

// Readers for the on-disk formats. Missing files yield empty results.
std::vector<Session> LoadSessions(const std::filesystem::path& dir);
std::vector<TraceRecord> LoadTraces(const std::filesystem::path& dir);
Session ReadTranscript(const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_SESSION_H_
