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

#include "parley/neural_reply.h"

#include <stdexcept>

#include "parley/prng.h"

namespace parley {

const Seq2SeqModel& SelectTopicModel(const TopicModels& models,
                                     const TopicDistribution& distribution) {
  if (auto it = models.find(distribution.Argmax()); it != models.end()) return it->second;
  auto general = models.find(Topic::kGeneral);
  if (general == models.end()) throw std::invalid_argument("no General seq2seq model");
  return general->second;
}

std::vector<Candidate> NeuralReply(const TopicModels& models,
                                   const TopicDistribution& distribution,
                                   std::string_view resolved_input, std::uint64_t seed,
                                   std::size_t max_len) {
  const Seq2SeqModel& model = SelectTopicModel(models, distribution);
  const std::size_t limit = max_len == 0 ? model.config.max_len : max_len;
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < kNeuralTemperatures.size(); ++i) {
    std::string text =
        Generate(model, resolved_input, kNeuralTemperatures[i], limit, MixSeed(seed, i));
    if (text.empty()) continue;
    candidates.push_back(Candidate::Make(std::move(text), Generator::kNeural));
  }
  return candidates;
}

}  // namespace parley
