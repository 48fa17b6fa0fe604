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

#include <sstream>
#include <string>

#include "doctest.h"
#include "pipeline_fixture.h"

namespace parley {
namespace {

using testing::Harness;

std::string Run(Harness& h, const std::string& input, int* status = nullptr) {
  std::istringstream in(input);
  std::ostringstream out;
  const int code = RunRepl(h.pipeline, in, out);
  if (status != nullptr) *status = code;
  return out.str();
}

TEST_CASE("quit asks for a rating") {
  Harness h;
  int status = -1;
  const std::string out = Run(h, "hello\n/quit\n4\n", &status);
  CHECK(status == 0);
  CHECK(out.find("bot: ") != std::string::npos);
  CHECK(out.find("how would you rate") != std::string::npos);
  CHECK(out.find("Rating 4 recorded") != std::string::npos);
  CHECK(out.ends_with("Bye!\n"));
  const auto sessions = h.store.Sessions();
  REQUIRE(sessions.size() == 1);
  CHECK(sessions[0].rating == 4);
  CHECK(sessions[0].turns.size() == 2);
}

TEST_CASE("rate command skips the quit prompt") {
  Harness h;
  const std::string out = Run(h, "/rate 5\n/quit\n");
  CHECK(out.find("Rating 5 recorded (") != std::string::npos);
  CHECK(out.find("how would you rate") == std::string::npos);
  CHECK(h.store.Sessions()[0].rating == 5);
}

TEST_CASE("bad ratings") {
  Harness h;
  const std::string out = Run(h, "/rate 9\n/rate\n/quit\nlots\n");
  CHECK(out.find("Usage: /rate N") != std::string::npos);
  CHECK(out.find("No rating recorded.") != std::string::npos);
  CHECK_FALSE(h.store.Sessions()[0].rating.has_value());
}

TEST_CASE("end of input exits cleanly") {
  Harness h;
  int status = -1;
  Run(h, "hello\n", &status);
  CHECK(status == 0);
  CHECK(h.store.Sessions()[0].turns.size() == 2);
}

TEST_CASE("trace command") {
  Harness h;
  const std::string out = Run(h, "/trace\nhow old are you\n/trace\n");
  CHECK(out.find("No trace yet.") != std::string::npos);
  CHECK(out.find("\"chosen_generator\": \"backstory\"") != std::string::npos);
}

}  // namespace
}  // namespace parley
