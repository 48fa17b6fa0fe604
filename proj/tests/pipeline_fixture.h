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


#ifndef PARLEY_TESTS_PIPELINE_FIXTURE_H_
#define PARLEY_TESTS_PIPELINE_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <utility>

#include "parley/config.h"
#include "parley/pipeline.h"
#include "test_util.h"

namespace parley::testing {

inline constexpr std::int64_t kFixtureNow = 1767225600;

// The shipped configuration with logging kept in memory.
inline PipelineConfig ShippedConfig() {
  PipelineConfig config = LoadConfig(DataPath("parley.conf"));
  config.log_dir.clear();
  return config;
}

inline const PipelineResources& ShippedResources() {
  static const PipelineResources resources = LoadResources(ShippedConfig());
  return resources;
}

struct Harness {
  explicit Harness(PipelineConfig config = ShippedConfig(),
                   PipelineResources resources = ShippedResources(),
                   std::filesystem::path log_dir = {})
      : store(std::move(log_dir)),
        clock(kFixtureNow),
        pipeline(std::move(config), std::move(resources), store, clock) {}

  SessionStore store;
  ManualClock clock;
  Pipeline pipeline;
};

}  // namespace parley::testing

#endif  // PARLEY_TESTS_PIPELINE_FIXTURE_H_
