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

#include "parley/repl.h"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "parley/analytics.h"
#include "parley/codec.h"
#include "parley/text.h"

namespace parley {

namespace {

std::optional<int> ParseRating(std::string_view text) {
  const std::string trimmed = Trim(text);
  int value = 0;
  const char* end = trimmed.data() + trimmed.size();
  const auto result = std::from_chars(trimmed.data(), end, value);
  if (trimmed.empty() || result.ec != std::errc() || result.ptr != end) return std::nullopt;
  if (value < 1 || value > 5) return std::nullopt;
  return value;
}

void Rate(Pipeline& pipeline, const std::string& id, int rating, std::ostream& out) {
  pipeline.store().RecordRating(id, rating);
  out << "Rating " << rating << " recorded (" << RatingMeaning(rating) << ").\n";
}

}  // namespace

int RunRepl(Pipeline& pipeline, std::istream& in, std::ostream& out) {
  const Session session = pipeline.CreateSession();
  bool rated = false;
  std::optional<Trace> last_trace;
  out << "Session " << session.id << ". Type /quit to leave, /rate N to rate, /trace to inspect.\n";

  std::string line;
  while (true) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) {
      out << '\n';
      return 0;
    }
    const std::string command = Trim(line);
    if (command.empty()) continue;

    if (command == "/quit") {
      if (!rated) {
        out << "Before you go, how would you rate this conversation from 1 to 5? " << std::flush;
        std::string answer;
        if (std::getline(in, answer)) {
          if (const auto rating = ParseRating(answer)) {
            Rate(pipeline, session.id, *rating, out);
          } else {
            out << "No rating recorded.\n";
          }
        } else {
          out << '\n';
        }
      }
      out << "Bye!\n";
      return 0;
    }
    if (command == "/trace") {
      if (last_trace) {
        out << TraceToJson(*last_trace).dump(2) << '\n';
      } else {
        out << "No trace yet.\n";
      }
      continue;
    }
    if (command.starts_with("/rate")) {
      if (const auto rating = ParseRating(std::string_view(command).substr(5))) {
        Rate(pipeline, session.id, *rating, out);
        rated = true;
      } else {
        out << "Usage: /rate N with N from 1 to 5.\n";
      }
      continue;
    }

    const Reply reply = pipeline.Respond(session.id, command);
    last_trace = reply.trace;
    out << "bot: " << reply.text << '\n';
  }
}

}  // namespace parley
