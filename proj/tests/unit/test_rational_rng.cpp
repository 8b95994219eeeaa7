// Copyright 2026 The pdgen Authors
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


#include <cstdint>
#include <limits>
#include <set>

#include "doctest.h"
#include "pdgen/rational.hpp"
#include "pdgen/rng.hpp"

using pdgen::Rational;
using pdgen::RationalOverflow;
using pdgen::Rng;

TEST_CASE("rational normalizes sign and common factors") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(3, -6).den() == 2);
  CHECK(Rational(0, 7) == Rational(0));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(3, 4) == Rational(-1, 4));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
  CHECK(-Rational(5, 7) == Rational(-5, 7));
  CHECK(Rational(-5, 7).abs() == Rational(5, 7));
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
}

TEST_CASE("rational powers") {
  CHECK(Rational(2).pow(10) == Rational(1024));
  CHECK(Rational(2).pow(-2) == Rational(1, 4));
  CHECK(Rational(-3).pow(3) == Rational(-27));
  CHECK(Rational(7).pow(0) == Rational(1));
  CHECK_THROWS_AS(Rational(2).pow(Rational(1, 2)), std::domain_error);
  CHECK_THROWS_AS(Rational(2).pow(64), RationalOverflow);
  CHECK(Rational(2).pow(62) == Rational(std::int64_t{1} << 62));
}

TEST_CASE("rational overflow is reported, not wrapped") {
  const Rational big(std::numeric_limits<std::int64_t>::max());
  CHECK_THROWS_AS(big + Rational(1), RationalOverflow);
  CHECK_THROWS_AS(big * Rational(2), RationalOverflow);
  // Wide intermediates that reduce back into range are fine.
  CHECK(big * Rational(1, 2) * Rational(2) == big);
}

TEST_CASE("rational text round trip") {
  CHECK(Rational(3).str() == "3");
  CHECK(Rational(-5, 2).str() == "-5/2");
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK(Rational::parse("3/6") == Rational(1, 2));
  CHECK(Rational::parse("+4") == Rational(4));
  CHECK(Rational::parse("1.50") == Rational(3, 2));
  CHECK_FALSE(Rational::parse("1/0"));
  CHECK_FALSE(Rational::parse("abc"));
  CHECK_FALSE(Rational::parse(""));
  CHECK_FALSE(Rational::parse("1/2/3"));
  CHECK_FALSE(Rational::parse("."));
  for (const Rational& r : {Rational(7, 3), Rational(-11, 4), Rational(0), Rational(123456789)}) {
    CHECK(Rational::parse(r.str()) == r);
  }
}

TEST_CASE("stable hash is 64-bit FNV-1a") {
  CHECK(pdgen::stable_hash("") == 0xcbf29ce484222325ULL);
  CHECK(pdgen::stable_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(pdgen::stable_hash("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("derived seeds depend on both inputs") {
  CHECK(pdgen::derive_seed(0, "a") == pdgen::derive_seed(0, "a"));
  CHECK(pdgen::derive_seed(0, "a") != pdgen::derive_seed(1, "a"));
  CHECK(pdgen::derive_seed(0, "a") != pdgen::derive_seed(0, "b"));
  CHECK(pdgen::derive_seed(5, std::uint64_t{1}) != pdgen::derive_seed(5, std::uint64_t{2}));
}

TEST_CASE("rng draws stay in range and are reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
  Rng r(7);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto v = r.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    seen.insert(v);
    double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(r.index(0), std::invalid_argument);
  CHECK_THROWS_AS(r.range(2, 1), std::invalid_argument);
}

TEST_CASE("rng sample gives distinct sorted indices") {
  Rng r(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = r.sample(10, 4);
    REQUIRE(s.size() == 4);
    for (size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
    CHECK(s.back() < 10);
  }
  CHECK(r.sample(5, 5) == std::vector<size_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(r.sample(3, 4), std::invalid_argument);
}

TEST_CASE("shuffle is a permutation") {
  Rng r(11);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  r.shuffle(v);
  std::multiset<int> m(v.begin(), v.end());
  CHECK(m == std::multiset<int>{1, 2, 3, 4, 5, 6, 7, 8});
}
