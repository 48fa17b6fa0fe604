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


#include "parley/text.h"

#include <string>
#include <vector>

#include "doctest.h"
#include "parley/prng.h"
#include "test_util.h"

namespace parley {
namespace {

using Tokens = std::vector<std::string>;

// Expected values below come from an out-of-tree reference implementation of
// the generator and hash, not from this library.

TEST_CASE("lcg64 matches reference sequence") {
  Lcg64 rng(42);
  CHECK(rng.Next() == 0x91778aed87ee5eb1ULL);
  CHECK(rng.Next() == 0x39b7f8a5c64cf56cULL);
  CHECK(rng.Next() == 0x69afc5a5e88b394bULL);

  Lcg64 indices(42);
  for (std::size_t expected : {4u, 6u, 8u, 3u, 4u}) CHECK(indices.UniformIndex(10) == expected);

  Lcg64 doubles(7);
  CHECK(doubles.UniformDouble() == 0.4932122668392295);
  CHECK(doubles.UniformDouble() == 0.9556595384052861);
  CHECK(doubles.UniformDouble() == 0.9065758219926131);
}

TEST_CASE("mix_seed matches reference") {
  CHECK(MixSeed(42, 0) == 0xbdd732262feb6e95ULL);
  CHECK(MixSeed(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(MixSeed(1, 5) == 0xc34d0bff90150280ULL);
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("tokenize drops stopwords and punctuation") {
  CHECK(Tokenize("How did Neil Gorsuch do in his confirmation hearings?") ==
        Tokens{"neil", "gorsuch", "confirmation", "hearings"});
  CHECK(Tokenize("").empty());
  CHECK(Tokenize("The the THE").empty());
  CHECK(RawTokens("It's a  DOG-day!") == Tokens{"it", "s", "a", "dog", "day"});
}

TEST_CASE("tokenize is idempotent on its joined output") {
  for (const char* text : {"How did Neil Gorsuch do in his confirmation hearings?",
                           "I think Rush Hour is the best action movie I've ever seen",
                           "caf\xC3\xA9 au lait, 2 sugars!!", ""}) {
    const Tokens once = Tokenize(text);
    std::string joined;
    for (const std::string& t : once) joined += t + " ";
    CHECK(Tokenize(joined) == once);
  }
}

TEST_CASE("token spans index the original text") {
  const std::string text = "Do you know France?";
  for (const TokenSpan& span : TokenizeWithSpans(text)) {
    CHECK(ToLower(text.substr(span.begin, span.end - span.begin)) == span.text);
  }
}

TEST_CASE("shipped stopword file matches built-in list") {
  CHECK(LoadStopwords(testing::DataPath("stopwords.txt")) == DefaultStopwords());
  CHECK(DefaultStopwords().size() == 50);
}

TEST_CASE("jaccard and duplicate ratio by hand") {
  CHECK(Jaccard({"a", "b", "c"}, {"a", "b", "d"}) == doctest::Approx(2.0 / 4.0));
  CHECK(Jaccard({"a"}, {"a"}) == 1.0);
  CHECK(Jaccard({}, {}) == 0.0);
  CHECK(DuplicateRatio({"a", "a", "b"}) == doctest::Approx(1.0 / 3.0));
  CHECK(DuplicateRatio({"yes", "yes", "yes", "yes"}) == doctest::Approx(0.75));
  CHECK(DuplicateRatio({}) == 0.0);
}

TEST_CASE("hash features") {
  CHECK(HashFeatures({}, 1024).entries().empty());

  const FeatureVector twice = HashFeatures({"a", "a"}, 1024);
  REQUIRE(twice.entries().size() == 1);
  CHECK(twice.entries().begin()->second == 2.0);
  CHECK(twice.entries().begin()->first == 140);

  const FeatureVector neil = HashFeatures({"neil"}, 1024);
  REQUIRE(neil.entries().size() == 1);
  CHECK(neil.entries().begin()->first == 473);

  const FeatureVector wide = HashFeatures({"hello", "neil", "gorsuch"}, 1 << 14);
  for (const auto& [index, value] : wide.entries()) CHECK(index < wide.dimension());
  CHECK(wide.Get(15627) == 1.0);

  CHECK_THROWS(HashFeatures({"a"}, 1000));
  FeatureVector v(4);
  CHECK_THROWS(v.Add(4, 1.0));
}

TEST_CASE("trim and lower") {
  CHECK(Trim("  hi there \n") == "hi there");
  CHECK(ToLower("HeLLo \xC3\x89") == "hello \xC3\x89");
}

}  // namespace
}  // namespace parley
