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

#ifndef PARLEY_REPL_H_
#define PARLEY_REPL_H_

#include <iosfwd>

#include "parley/pipeline.h"

namespace parley {

// Line-oriented chat on one new session. Besides ordinary messages it
// understands:
//   /rate N   record a 1-5 rating
//   /trace    print the last turn's trace as JSON
//   /quit     ask for a rating (unless one was given) and exit
// Returns 0 on /quit or end of input.
int RunRepl(Pipeline& pipeline, std::istream& in, std::ostream& out);

}  // namespace parley

#endif  // PARLEY_REPL_H_
