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

#ifndef PARLEY_SERVER_H_
#define PARLEY_SERVER_H_

// HTTP API over a Pipeline. All bodies are JSON.
//
//   POST /sessions                    -> {"session_id"}
//   POST /sessions/{id}/messages      {"text"} -> {"reply", "trace"}
//   POST /sessions/{id}/rating        {"rating"} -> {}
//   GET  /sessions/{id}/transcript    -> {"session_id", "turns", "rating"?}
//   GET  /analytics                   -> stats table
//
// Errors carry {"error": message}: 400 for malformed input, 404 for unknown
// sessions or routes, 405 for a known route with the wrong method.

#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"
#include "parley/pipeline.h"

namespace parley {

struct ApiResponse {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
};

// Socket-free request dispatch; the HTTP server is a thin shell around it.
class ApiRouter {
 public:
  explicit ApiRouter(Pipeline& pipeline) : pipeline_(pipeline) {}

  ApiResponse Handle(std::string_view method, std::string_view path, std::string_view body);

 private:
  ApiResponse CreateSession();
  ApiResponse PostMessage(const std::string& id, std::string_view body);
  ApiResponse PostRating(const std::string& id, std::string_view body);
  ApiResponse Transcript(const std::string& id);
  ApiResponse Analytics();

  Pipeline& pipeline_;
};

class ChatServer {
 public:
  explicit ChatServer(Pipeline& pipeline);
  ~ChatServer();
  ChatServer(const ChatServer&) = delete;
  ChatServer& operator=(const ChatServer&) = delete;

  // Binds to host:port (port 0 picks a free port) and returns the bound
  // port. Throws std::runtime_error on failure.
  int Bind(const std::string& host, int port);
  // Serves until Stop(). Requires a successful Bind().
  void Run();
  void Stop();
  // Blocks until the server accepts connections.
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace parley

#endif  // PARLEY_SERVER_H_
