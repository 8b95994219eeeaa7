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


#include <set>

#include "doctest.h"
#include "pdgen/evaluation.hpp"
#include "pdgen/synthetic.hpp"

using namespace pdgen;

TEST_CASE("generated corpus is valid and reproducible") {
  SimulateOptions o;
  o.n_students = 6;
  o.n_past = 8;
  o.n_test = 3;
  o.seed = 4;
  auto a = generate_dataset(arith::RulePack::builtin(), o);
  auto b = generate_dataset(arith::RulePack::builtin(), o);
  CHECK(a.datasets == b.datasets);
  REQUIRE(a.datasets.size() == 6);
  CHECK(a.dropped.empty());
  for (size_t i = 0; i < a.datasets.size(); ++i) {
    const auto& ds = a.datasets[i];
    CHECK(validate_dataset(ds).empty());
    CHECK(ds.past_records.size() == 8);
    CHECK(ds.test_records.size() == 3);
    CHECK(check_student(a.students[i], arith::RulePack::builtin()).empty());
    for (const auto& r : ds.past_records) {
      CHECK_FALSE(evaluation::answers_equivalent(r.chosen_answer, r.correct_answer));
      // The stored answer is the student's own.
      CHECK(r.chosen_answer == answer_question(arith::RulePack::builtin(), a.students[i], r.stem).answer);
    }
  }
  o.seed = 5;
  CHECK(generate_dataset(arith::RulePack::builtin(), o).datasets != a.datasets);
}

TEST_CASE("stop fraction assigns stop rules") {
  SimulateOptions o;
  o.n_students = 10;
  o.n_past = 2;
  o.n_test = 1;
  o.premature_stop_fraction = 0.2;
  auto c = generate_dataset(arith::RulePack::builtin(), o);
  int stops = 0;
  for (const auto& s : c.students) stops += s.buggy_rule_ids.front() == "premature_stop_product";
  CHECK(stops == 2);
}

TEST_CASE("student check") {
  const auto& pack = arith::RulePack::builtin();
  CHECK_FALSE(check_student({"s", {}}, pack).empty());
  CHECK_FALSE(check_student({"s", {"nope"}}, pack).empty());
  CHECK_FALSE(check_student({"s", {"inequality_flip"}}, pack).empty());  // a correct rule
  CHECK(check_student({"s", {"power_minus_one"}}, pack).empty());
}

TEST_CASE("records_for skips correct answers") {
  SyntheticStudent s{"s", {"inequality_no_flip"}};
  auto recs = records_for(arith::RulePack::builtin(), s, {"Solve 2x < 6", "Solve -2x < 6"}, "r-");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].stem == "Solve -2x < 6");
  CHECK(recs[0].chosen_answer == "x < -3");
}

TEST_CASE("shared error stems") {
  const auto& pack = arith::RulePack::builtin();
  std::vector<SyntheticStudent> pair{{"a", {"square_instead_of_power"}}, {"b", {"power_minus_one"}}};
  auto stems = shared_error_stems(pack, pair, 5, 1);
  CHECK(stems.size() == 5);
  CHECK(std::set<std::string>(stems.begin(), stems.end()).size() == 5);
  for (const auto& st : stems) {
    for (const auto& s : pair) CHECK_FALSE(evaluation::answers_equivalent(answer_question(pack, s, st).answer, correct_answer(pack, st)));
  }
  // A linear rule and a counting rule never share a stem.
  std::vector<SyntheticStudent> disjoint{{"a", {"inequality_no_flip"}}, {"b", {"functions_swapped"}}};
  CHECK_THROWS_AS(shared_error_stems(pack, disjoint, 1, 1, 500), InsufficientTemplates);
}

TEST_CASE("group questions carry the top three actual distractors") {
  const auto& pack = arith::RulePack::builtin();
  std::vector<SyntheticStudent> students{{"a", {"power_minus_one"}}, {"b", {"power_minus_one"}},
                                         {"c", {"square_instead_of_power"}}, {"d", {"premature_stop_product"}}};
  auto qs = make_group_questions(pack, students, 3, 2);
  CHECK(qs.size() == 3);
  for (const auto& q : qs) {
    CHECK_FALSE(q.actual_distractors.empty());
    CHECK(q.actual_distractors.size() <= 3);
    std::vector<AnswerText> all;
    for (const auto& s : students) {
      auto a = answer_question(pack, s, q.stem).answer;
      if (!evaluation::answers_equivalent(a, q.correct_answer)) all.push_back(a);
    }
    CHECK(q.actual_distractors == evaluation::top_k_answers(all, 3));
  }
}
