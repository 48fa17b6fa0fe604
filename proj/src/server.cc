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

#include "parley/server.h"

#include <stdexcept>
#include <vector>

#include "httplib.h"
#include "parley/analytics.h"
#include "parley/codec.h"

namespace parley {

namespace {

ApiResponse Error(int status, std::string message) {
  return ApiResponse{status, Json{{"error", std::move(message)}}};
}

std::vector<std::string_view> PathSegments(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const std::size_t begin = i;
    while (i < path.size() && path[i] != '/') ++i;
    if (i > begin) parts.push_back(path.substr(begin, i - begin));
  }
  return parts;
}

std::optional<Json> ParseBody(std::string_view body) {
  Json doc = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  return doc;
}

}  // namespace

ApiResponse ApiRouter::Handle(std::string_view method, std::string_view path,
                              std::string_view body) {
  const std::size_t query = path.find('?');
  const auto parts = PathSegments(path.substr(0, query));
  const auto expect = [&](std::string_view wanted) { return method == wanted; };

  if (parts.size() == 1 && parts[0] == "sessions") {
    return expect("POST") ? CreateSession() : Error(405, "use POST");
  }
  if (parts.size() == 1 && parts[0] == "analytics") {
    return expect("GET") ? Analytics() : Error(405, "use GET");
  }
  if (parts.size() == 3 && parts[0] == "sessions") {
    const std::string id(parts[1]);
    if (parts[2] == "messages") return expect("POST") ? PostMessage(id, body) : Error(405, "use POST");
    if (parts[2] == "rating") return expect("POST") ? PostRating(id, body) : Error(405, "use POST");
    if (parts[2] == "transcript") return expect("GET") ? Transcript(id) : Error(405, "use GET");
  }
  return Error(404, "no route for " + std::string(path));
}

ApiResponse ApiRouter::CreateSession() {
  const Session session = pipeline_.CreateSession();
  return ApiResponse{200, Json{{"session_id", session.id}}};
}

ApiResponse ApiRouter::PostMessage(const std::string& id, std::string_view body) {
  if (!pipeline_.store().Contains(id)) return Error(404, "unknown session: " + id);
  const std::optional<Json> doc = ParseBody(body);
  if (!doc) return Error(400, "body must be a JSON object");
  const auto text = doc->find("text");
  if (text == doc->end() || !text->is_string()) return Error(400, "\"text\" must be a string");
  try {
    const Reply reply = pipeline_.Respond(id, text->get<std::string>());
    return ApiResponse{200, Json{{"reply", reply.text}, {"trace", TraceToJson(reply.trace)}}};
  } catch (const std::out_of_range& e) {
    return Error(404, e.what());
  } catch (const std::invalid_argument& e) {
    return Error(400, e.what());
  }
}

ApiResponse ApiRouter::PostRating(const std::string& id, std::string_view body) {
  if (!pipeline_.store().Contains(id)) return Error(404, "unknown session: " + id);
  const std::optional<Json> doc = ParseBody(body);
  if (!doc) return Error(400, "body must be a JSON object");
  const auto rating = doc->find("rating");
  if (rating == doc->end() || !rating->is_number_integer()) {
    return Error(400, "\"rating\" must be an integer");
  }
  const auto value = rating->get<std::int64_t>();
  if (value < 1 || value > 5) return Error(400, "rating must be between 1 and 5");
  pipeline_.store().RecordRating(id, static_cast<int>(value));
  return ApiResponse{};
}

ApiResponse ApiRouter::Transcript(const std::string& id) {
  const std::optional<Session> session = pipeline_.store().Get(id);
  if (!session) return Error(404, "unknown session: " + id);
  Json turns = Json::array();
  for (const Turn& turn : session->turns) {
    turns.push_back({{"turn_index", turn.turn_index},
                     {"speaker", SpeakerName(turn.speaker)},
                     {"text", turn.text},
                     {"timestamp", turn.timestamp}});
  }
  Json out = {{"session_id", session->id}, {"turns", std::move(turns)}};
  if (session->rating) out["rating"] = *session->rating;
  return ApiResponse{200, std::move(out)};
}

ApiResponse ApiRouter::Analytics() {
  const std::vector<Session> sessions = pipeline_.store().Sessions();
  const std::vector<TraceRecord> traces = pipeline_.store().Traces();
  const StatsTable table = ComputeStats(sessions, traces, pipeline_.config().marker_words);
  return ApiResponse{200, StatsToJson(table)};
}

struct ChatServer::Impl {
  explicit Impl(Pipeline& pipeline) : router(pipeline) {}

  ApiRouter router;
  httplib::Server server;
  bool bound = false;
};

ChatServer::ChatServer(Pipeline& pipeline) : impl_(std::make_unique<Impl>(pipeline)) {
  httplib::Server& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  const auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse response = impl_->router.Handle(req.method, req.path, req.body);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  server.Get(R"(/.*)", dispatch);
  server.Post(R"(/.*)", dispatch);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
}

ChatServer::~ChatServer() { Stop(); }

int ChatServer::Bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
    if (bound_port < 0) throw std::runtime_error("cannot bind to " + host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind to " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound_port;
}

void ChatServer::Run() {
  if (!impl_->bound) throw std::logic_error("ChatServer::Run before Bind");
  impl_->server.listen_after_bind();
}

void ChatServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void ChatServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace parley
