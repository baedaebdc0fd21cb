// src/base/base-test.cc

// Copyright 2026  The AVST Authors

// See the top-level LICENSE file for the full license text.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/base/text-utils.h"
#include "doctest.h"

namespace avst {

TEST_CASE("derived seeds are reproducible and tag-dependent") {
  CHECK(DeriveSeed(1, "a") == DeriveSeed(1, "a"));
  CHECK(DeriveSeed(1, "a") != DeriveSeed(1, "b"));
  CHECK(DeriveSeed(1, "a") != DeriveSeed(2, "a"));
  CHECK(DeriveSeed(5, uint64_t{3}) != DeriveSeed(5, uint64_t{4}));
  // FNV-1a reference values.
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("uniform draws stay in range and cover it") {
  Rng rng(42);
  std::set<uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const uint64_t k = UniformIndex(rng, 7);
    REQUIRE(k < 7);
    seen.insert(k);
    const double u = UniformUnit(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("standard normal moments") {
  Rng rng(7);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = StandardNormal(rng);
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("random permutation is a permutation") {
  Rng rng(3);
  std::vector<int> p = RandomPermutation(rng, 50);
  std::set<int> s(p.begin(), p.end());
  CHECK(s.size() == 50);
  CHECK(*s.begin() == 0);
  CHECK(*s.rbegin() == 49);
  Rng a(9), b(9);
  CHECK(RandomPermutation(a, 20) == RandomPermutation(b, 20));
}

TEST_CASE("binary io round trip and truncation") {
  std::ostringstream os;
  WriteU32(os, 0xdeadbeef);
  WriteF32(os, 1.5f);
  std::string bytes = os.str();
  CHECK(bytes.size() == 8);
  CHECK(static_cast<unsigned char>(bytes[0]) == 0xef);  // little endian
  std::istringstream is(bytes);
  CHECK(ReadU32(is, "x") == 0xdeadbeef);
  CHECK(ReadF32(is, "y") == 1.5f);
  std::istringstream short_is(bytes.substr(0, 3));
  CHECK_THROWS_AS(ReadU32(short_is, "x"), DataError);
  std::istringstream magic("ABCD");
  CHECK_THROWS_AS(ExpectMagic(magic, "WXYZ", "test"), DataError);
}

TEST_CASE("text helpers") {
  CHECK(SplitWhitespace("  a \t b\nc ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(SplitWhitespace("   ").empty());
  CHECK(Trim("  x y  ") == "x y");
  CHECK(JoinWords({"a", "b"}) == "a b");
  CHECK(FormatPercent(1.0 / 6.0) == "16.7%");
  CHECK(FormatPercent(0.0) == "0.0%");
  CHECK(FormatPercent(1.0) == "100.0%");
  CHECK(DirName("a/b/c.txt") == "a/b");
  CHECK(DirName("c.txt") == ".");
  CHECK(ResolvePath("dir", "/abs") == "/abs");
  CHECK(ResolvePath("dir", "rel") == "dir/rel");
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(UsageError("x").ExitCode() == 1);
  CHECK(DataError("x").ExitCode() == 2);
  CHECK(NumericError("x").ExitCode() == 3);
}

}  // namespace avst
