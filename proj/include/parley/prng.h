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

#ifndef PARLEY_PRNG_H_
#define PARLEY_PRNG_H_

#include <cstddef>
#include <cstdint>

namespace parley {

// 64-bit linear congruential generator (Knuth's MMIX constants).
//
//   state' = state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//
// The state starts at the seed and is advanced before every draw.
// UniformIndex(n) returns (state' >> 33) % n; UniformDouble() returns
// (state' >> 11) * 2^-53. Every "random" choice in the engine goes through
// this class so results are reproducible from the seed alone.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  // Index in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n) {
    return static_cast<std::size_t>((Next() >> 33) % n);
  }

  // Real in [0, 1).
  double UniformDouble() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformDouble(); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Combines a base seed with a salt into a new seed (splitmix64 finalizer).
inline std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace parley

#endif  // PARLEY_PRNG_H_
