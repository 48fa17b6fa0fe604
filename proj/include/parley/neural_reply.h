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

#ifndef PARLEY_NEURAL_REPLY_H_
#define PARLEY_NEURAL_REPLY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "parley/seq2seq.h"
#include "parley/session.h"
#include "parley/topic_forest.h"
#include "parley/topics.h"

namespace parley {

using TopicModels = std::map<Topic, Seq2SeqModel>;

inline constexpr std::array<double, 3> kNeuralTemperatures = {0.7, 0.9, 1.1};

// The model for the distribution's argmax topic, or the General model when
// that topic has none. Throws std::invalid_argument without a General model.
const Seq2SeqModel& SelectTopicModel(const TopicModels& models,
                                     const TopicDistribution& distribution);

// One sample per temperature in kNeuralTemperatures, sample i seeded with
// MixSeed(seed, i). Empty generations are dropped. max_len 0 means the
// model's configured max_len.
std::vector<Candidate> NeuralReply(const TopicModels& models,
                                   const TopicDistribution& distribution,
                                   std::string_view resolved_input, std::uint64_t seed,
                                   std::size_t max_len = 0);

}  // namespace parley

#endif  // PARLEY_NEURAL_REPLY_H_
