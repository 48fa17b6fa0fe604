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

#ifndef PARLEY_REPLY_SELECTION_H_
#define PARLEY_REPLY_SELECTION_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "parley/session.h"
#include "parley/svm.h"

namespace parley {

struct FilterPolicy {
  // Lowercase tokens.
  std::unordered_set<std::string> blocklist;
  std::size_t min_tokens = 1;
  // Counted in code points.
  std::size_t max_chars = 280;
  double max_repeat_ratio = 0.5;
};

// Blocklist file: one word per line, lowercased on load.
std::unordered_set<std::string> LoadBlocklist(const std::filesystem::path& path);

// False if the text has a blocklisted token, fewer than min_tokens tokens,
// more than max_chars characters, a control character or invalid UTF-8, or a
// duplicate ratio above max_repeat_ratio.
bool PassesFilter(std::string_view text, const FilterPolicy& policy);

// Candidates passing PassesFilter, in input order.
std::vector<Candidate> ContentFilter(std::span<const Candidate> candidates,
                                     const FilterPolicy& policy);

// Engagement margin of a reply text under a lexical-mode model.
double EngagementMargin(const SvmModel& lexical_model, std::string_view text);

// Priority first, then engagement. The lowest tier present wins. In tier 1
// the lowest rule_rank wins, ties going to the earlier candidate. In tier 3
// each candidate is scored with `lexical_model` (its existing margin, or 0,
// when the model is null) and the largest margin wins, ties going to
// retrieval before neural and then to the lexicographically smaller text.
// Tier 2 takes its first candidate. The returned candidate carries the
// margin it was ranked by.
std::optional<Candidate> SelectReply(std::span<const Candidate> candidates,
                                     const SvmModel* lexical_model);

}  // namespace parley

#endif  // PARLEY_REPLY_SELECTION_H_
