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
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "parley/codec.h"

namespace parley {

namespace {

constexpr std::array<std::string_view, 6> kGeneratorNames = {
    "intent", "backstory", "entity_template", "qa", "retrieval", "neural"};

void ValidateRating(int rating) {
  if (rating < 1 || rating > 5) {
    throw std::invalid_argument("rating must be in [1, 5], got " +
                                std::to_string(rating));
  }
}

}  // namespace

std::string_view SpeakerName(Speaker speaker) {
  return speaker == Speaker::kUser ? "user" : "bot";
}

std::optional<Speaker> ParseSpeaker(std::string_view name) {
  if (name == "user") return Speaker::kUser;
  if (name == "bot") return Speaker::kBot;
  return std::nullopt;
}

std::string_view GeneratorName(Generator generator) {
  return kGeneratorNames[static_cast<std::size_t>(generator)];
}

std::optional<Generator> ParseGenerator(std::string_view name) {
  for (std::size_t i = 0; i < kGeneratorNames.size(); ++i) {
    if (kGeneratorNames[i] == name) return static_cast<Generator>(i);
  }
  return std::nullopt;
}

int PriorityTier(Generator generator) {
  switch (generator) {
    case Generator::kIntent:
    case Generator::kBackstory:
    case Generator::kEntityTemplate:
      return 1;
    case Generator::kQa:
      return 2;
    case Generator::kRetrieval:
    case Generator::kNeural:
      return 3;
  }
  return 3;
}

int RuleRank(Generator generator) {
  switch (generator) {
    case Generator::kIntent:
      return 1;
    case Generator::kBackstory:
      return 2;
    case Generator::kEntityTemplate:
      return 3;
    default:
      return 0;
  }
}

Candidate Candidate::Make(std::string text, Generator generator,
                          std::string template_id) {
  Candidate c;
  c.text = std::move(text);
  c.generator = generator;
  c.priority_tier = PriorityTier(generator);
  c.rule_rank = RuleRank(generator);
  c.template_id = std::move(template_id);
  return c;
}

Session CreateSession(std::string id, std::int64_t now) {
  Session session;
  session.id = std::move(id);
  session.created_at = now;
  return session;
}

Turn AppendTurn(Session& session, Speaker speaker, std::string_view text,
                std::int64_t now) {
  if (text.empty()) throw std::invalid_argument("turn text must be nonempty");
  Turn turn;
  turn.speaker = speaker;
  turn.text = std::string(text);
  // Timestamps never go backwards within a session.
  turn.timestamp = session.turns.empty()
                       ? now
                       : std::max(now, session.turns.back().timestamp);
  turn.turn_index = session.turns.size();
  session.turns.push_back(turn);
  return turn;
}

std::vector<Turn> RecentTurns(const Session& session, std::size_t n) {
  const std::size_t count = std::min(n, session.turns.size());
  return {session.turns.end() - static_cast<std::ptrdiff_t>(count),
          session.turns.end()};
}

Session& RecordRating(Session& session, int rating) {
  ValidateRating(rating);
  session.rating = rating;
  return session;
}

// SessionStore ---------------------------------------------------------------

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  std::filesystem::create_directories(dir_ / "sessions");
  for (Session& session : LoadSessions(dir_)) {
    auto entry = std::make_unique<Entry>();
    entry->session = std::move(session);
    sessions_.emplace(entry->session.id, std::move(entry));
  }
  next_sequence_ = sessions_.size();
  traces_ = LoadTraces(dir_);
}

Session SessionStore::Create(std::int64_t now) {
  std::unique_lock lock(map_mu_);
  std::string id;
  do {
    id = "s" + std::to_string(now) + "-" + std::to_string(next_sequence_++);
  } while (sessions_.count(id) > 0);

  auto entry = std::make_unique<Entry>();
  entry->session = CreateSession(id, now);
  Session snapshot = entry->session;
  if (!dir_.empty()) {
    Json header = {{"record", "session"}, {"session_id", id}, {"created_at", now}};
    AppendLine(TranscriptPath(id), header.dump());
  }
  sessions_.emplace(id, std::move(entry));
  return snapshot;
}

bool SessionStore::Contains(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  return sessions_.count(id) > 0;
}

SessionStore::Entry& SessionStore::Find(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw std::out_of_range("unknown session: " + id);
  return *it->second;
}

std::optional<Session> SessionStore::Get(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  std::lock_guard<std::mutex> entry_lock(it->second->mu);
  return it->second->session;
}

std::vector<std::string> SessionStore::ListIds() const {
  std::shared_lock lock(map_mu_);
  std::vector<std::string> ids;
  ids.reserve(sessions_.size());
  for (const auto& [id, entry] : sessions_) ids.push_back(id);
  return ids;
}

Turn SessionStore::AppendTurn(const std::string& id, Speaker speaker,
                              std::string_view text, std::int64_t now) {
  Entry& entry = Find(id);
  std::lock_guard<std::mutex> lock(entry.mu);
  Session draft = entry.session;
  Turn turn = parley::AppendTurn(draft, speaker, text, now);
  if (!dir_.empty()) AppendLine(TranscriptPath(id), TurnToJson(id, turn).dump());
  entry.session.turns.push_back(turn);
  return turn;
}

void SessionStore::RecordRating(const std::string& id, int rating) {
  ValidateRating(rating);
  Entry& entry = Find(id);
  std::lock_guard<std::mutex> lock(entry.mu);
  if (!dir_.empty()) {
    Json record = {{"record", "rating"}, {"session_id", id}, {"rating", rating}};
    AppendLine(TranscriptPath(id), record.dump());
  }
  entry.session.rating = rating;
}

void SessionStore::LogTrace(const std::string& session_id, const Trace& trace) {
  TraceRecord record{session_id, trace};
  std::lock_guard<std::mutex> lock(trace_mu_);
  if (!dir_.empty()) AppendLine(TraceLogPath(), EncodeTraceRecord(record));
  traces_.push_back(std::move(record));
}

std::vector<Session> SessionStore::Sessions() const {
  std::shared_lock lock(map_mu_);
  std::vector<Session> out;
  out.reserve(sessions_.size());
  for (const auto& [id, entry] : sessions_) {
    std::lock_guard<std::mutex> entry_lock(entry->mu);
    out.push_back(entry->session);
  }
  return out;
}

std::vector<TraceRecord> SessionStore::Traces() const {
  std::lock_guard<std::mutex> lock(trace_mu_);
  return traces_;
}

std::filesystem::path SessionStore::TranscriptPath(const std::string& id) const {
  return dir_ / "sessions" / (id + ".jsonl");
}

std::filesystem::path SessionStore::TraceLogPath() const {
  return dir_ / "traces.jsonl";
}

void SessionStore::AppendLine(const std::filesystem::path& path,
                              const std::string& line) {
  // One write call per record so a record is never split across appends.
  std::string buffer = line;
  buffer.push_back('\n');
  std::ofstream out(path, std::ios::app | std::ios::binary);
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed to append to " + path.string());
}

// Readers --------------------------------------------------------------------

Session ReadTranscript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open transcript " + path.string());
  Session session;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ApplyTranscriptLine(line, session);
  }
  return session;
}

std::vector<Session> LoadSessions(const std::filesystem::path& dir) {
  std::vector<Session> sessions;
  const auto session_dir = dir / "sessions";
  if (!std::filesystem::is_directory(session_dir)) return sessions;
  std::vector<std::filesystem::path> paths;
  for (const auto& item : std::filesystem::directory_iterator(session_dir)) {
    if (item.path().extension() == ".jsonl") paths.push_back(item.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) sessions.push_back(ReadTranscript(path));
  return sessions;
}

std::vector<TraceRecord> LoadTraces(const std::filesystem::path& dir) {
  std::vector<TraceRecord> records;
  std::ifstream in(dir / "traces.jsonl", std::ios::binary);
  if (!in) return records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(DecodeTraceRecord(line));
  }
  return records;
}

}  // namespace parley
