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


#include <algorithm>

#include "../acceptance/equivalence_fixture.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "pdgen/evaluation.hpp"

using namespace pdgen;
using namespace pdgen::evaluation;
using pdgen::testing::record;

TEST_CASE("equivalence fixture") {
  for (const auto& f : acceptance::equivalence_fixture()) {
    CAPTURE(f.a);
    CAPTURE(f.b);
    CHECK(answers_equivalent(f.a, f.b) == f.equivalent);
    CHECK(answers_equivalent(f.b, f.a) == f.equivalent);
    CHECK(answers_equivalent(f.a, f.a));
  }
}

TEST_CASE("normalization") {
  CHECK(normalize_answer("  X   <  3 ") == "x < 3");
  CHECK(normalize_answer("$\\frac{1}{2}$") == "1/2");
  CHECK(normalize_answer("x \\geq −2.") == "x >= -2");
}

TEST_CASE("number parsing") {
  auto n = parse_number("50%");
  REQUIRE(n);
  CHECK(*n->exact == Rational(1, 2));
  CHECK_FALSE(parse_number("1/"));
  CHECK_FALSE(parse_number("x"));
  CHECK(parse_number("-.5")->decimal);
  CHECK_FALSE(parse_number("3/4")->decimal);
  // Too wide for an exact rational, still comparable.
  auto big = parse_number("123456789012345678901234567890");
  REQUIRE(big);
  CHECK_FALSE(big->exact);
  CHECK(answers_equivalent("123456789012345678901234567890", "123456789012345678901234567890.0"));
}

TEST_CASE("relation parsing moves the variable left") {
  auto r = parse_relation("3 > x");
  REQUIRE(r);
  CHECK(r->variable == "x");
  CHECK(r->op == "<");
  CHECK_FALSE(parse_relation("1 < x < 3"));
  CHECK_FALSE(parse_relation("x + 1 < 3"));
}

TEST_CASE("accuracy counts misses and rejects unknown ids") {
  std::vector<QARecord> truth{record("a", "q", "1", "2"), record("b", "q", "1", "3/4"), record("c", "q", "1", "5")};
  CHECK(accuracy({{"a", "2"}, {"b", "0.75"}}, truth) == doctest::Approx(2.0 / 3.0));
  CHECK(accuracy({{"a", "2"}, {"a", "9"}}, truth) == doctest::Approx(1.0 / 3.0));
  CHECK(accuracy({{"a", "9"}, {"a", "2"}}, truth) == 0.0);
  CHECK_THROWS_AS(accuracy({{"zz", "1"}}, truth), EvaluationError);
  CHECK_THROWS_AS(accuracy({}, {}), EvaluationError);
}

TEST_CASE("top-k merges equivalent answers") {
  CHECK(top_k_answers({"1/2", "0.5", "3", "3", "3", "7"}, 2) == std::vector<AnswerText>{"3", "1/2"});
  // Tie on count: earlier first appearance wins.
  CHECK(top_k_answers({"b", "a", "a", "b"}, 1) == std::vector<AnswerText>{"b"});
  CHECK(top_k_answers({"x"}, 3) == std::vector<AnswerText>{"x"});
  CHECK(top_k_answers({}, 3).empty());
}

TEST_CASE("group aggregation and recall") {
  auto g = aggregate_group({{"q", {"A", "A", "A", "A", "A", "B", "B", "B", "C", "C", "C", "D"}}}, 3);
  CHECK(g.at("q") == std::vector<AnswerText>{"A", "B", "C"});
  CHECK(recall({"A", "C", "X"}, {"A", "B", "C"}) == doctest::Approx(2.0 / 3.0));
  CHECK(recall({"0.5"}, {"1/2"}) == 1.0);
  CHECK(recall({}, {"1"}) == 0.0);
  CHECK_THROWS_AS(recall({"1"}, {}), EvaluationError);
}
