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


#include "doctest.h"
#include "helpers.hpp"
#include "pdgen/arith.hpp"
#include "pdgen/scripted_backend.hpp"
#include "pdgen/synthetic.hpp"

using namespace pdgen;
using pdgen::testing::record;

namespace {

ReasoningTrajectory student_trajectory(const std::string& rule, const std::string& stem) {
  return answer_question(arith::RulePack::builtin(), SyntheticStudent{"s", {rule}}, stem).trajectory;
}

double plausibility(const ReasoningTrajectory& t, const std::string& stem) {
  ScriptedBackend b;
  return b.score_plausibility(stem, t, correct_answer(arith::RulePack::builtin(), stem), t.final_answer, {});
}

}  // namespace

TEST_CASE("concept extraction") {
  ScriptedBackend b;
  auto c = b.extract_concepts(record("r", "Solve -2x + 4 < 10", "x > -3", "x < -3"), {});
  CHECK(c == std::vector<Concept>{Concept("inequality solving"), Concept("transposition")});
  CHECK_THROWS_AS(b.extract_concepts(record("r", "Name a colour", "red", "blue"), {}), BackendError);
}

TEST_CASE("proposals: one correct step plus distinct erroneous ones") {
  ScriptedBackend b;
  auto p = b.propose_children("Solve -2x < 6", {}, 3, {7});
  CHECK(p.correct_step.rule_id == "inequality_flip");
  REQUIRE(p.erroneous_steps.size() == 2);
  CHECK(p.erroneous_steps[0].rule_id == "inequality_no_flip");
  CHECK(p.erroneous_steps[1].rule_id == "coefficient_subtracted");
  for (const auto& s : p.erroneous_steps) CHECK(s.is_erroneous == true);

  // No buggy rule fires on 2x = 6 with B = 4 beyond coefficient_subtracted
  // and multiply_instead_of_divide; the rest are slips.
  auto q = b.propose_children("Solve 2x = 6", {}, 4, {7});
  REQUIRE(q.erroneous_steps.size() == 3);
  CHECK(arith::parse_slip_rule_id(*q.erroneous_steps[2].rule_id));

  auto done = b.rollout("Solve -2x < 6", {}, 10, {});
  CHECK_THROWS_AS(b.propose_children("Solve -2x < 6", done.steps, 3, {}), BackendError);
  try {
    b.propose_children("Solve -2x < 6", done.steps, 3, {});
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::kNoApplicableStep);
  }
  CHECK_THROWS_AS(b.propose_children("Solve -2x < 6", {}, 1, {}), std::invalid_argument);
}

TEST_CASE("rollout finishes correctly from any prefix") {
  ScriptedBackend b;
  auto t = b.rollout("Solve 3x + 3 = 9", {}, 10, {});
  CHECK(t.final_answer == "x = 2");
  CHECK(t.steps.size() == 2);
  auto wrong = student_trajectory("transposition_sign_kept", "Solve 3x + 3 = 9");
  auto from_bug = b.rollout("Solve 3x + 3 = 9", {wrong.steps[0]}, 10, {});
  CHECK(from_bug.final_answer == "x = 4");
  CHECK_THROWS_AS(b.rollout("Solve 3x + 3 = 9", {}, 1, {}), BackendError);
}

TEST_CASE("conclude reads the current value") {
  ScriptedBackend b;
  const std::string rel = "How many binary relations are there from a set A with 2 elements to a set B with 3 elements?";
  CHECK(b.conclude(rel, {}, {}).empty());
  auto t = b.rollout(rel, {}, 10, {});
  CHECK(b.conclude(rel, {t.steps[0]}, {}) == "6");
  CHECK(b.conclude(rel, t.steps, {}) == "64");
}

TEST_CASE("plausibility table") {
  const std::string lin = "Solve -2x + 4 < 10";
  const std::string rel = "How many binary relations are there from a set A with 2 elements to a set B with 3 elements?";
  ScriptedBackend b;
  CHECK(plausibility(student_trajectory("inequality_no_flip", lin), lin) == ScriptedPlausibility::kSingleBuggyRule);
  CHECK(plausibility(b.rollout(lin, {}, 10, {}), lin) == ScriptedPlausibility::kNoErrorCorrectAnswer);

  ReasoningTrajectory stop = student_trajectory("premature_stop_product", rel);
  CHECK(stop.source == TrajectorySource::kTerminalStop);
  CHECK(plausibility(stop, rel) == ScriptedPlausibility::kTerminalStopCorrectPrefix);

  auto two = answer_question(arith::RulePack::builtin(),
                             SyntheticStudent{"s", {"transposition_sign_kept", "inequality_no_flip"}}, lin);
  CHECK(two.fired_rules.size() == 2);
  CHECK(plausibility(two.trajectory, lin) == ScriptedPlausibility::kMultipleErrors);

  auto start = *arith::parse_stem(lin);
  auto slip = arith::RulePack::builtin().slip_step(start, 1);
  auto slipped = b.rollout(lin, {slip->step}, 10, {});
  CHECK(plausibility(slipped, lin) == ScriptedPlausibility::kSingleSlip);

  ReasoningTrajectory bare;
  bare.final_answer = "x < 0";
  CHECK(plausibility(bare, lin) == ScriptedPlausibility::kNoErrorWrongAnswer);
}

TEST_CASE("error attribution and summaries") {
  ScriptedBackend b;
  auto t = student_trajectory("power_minus_one", "How many subsets does a set with 5 elements have?");
  CHECK(b.attribute_errors(t) == std::vector<std::string>{"power_minus_one"});
  auto stop = student_trajectory("premature_stop_product",
                                 "How many binary relations are there from a set A with 4 elements to a set B with 3 elements?");
  CHECK(b.attribute_errors(stop) == std::vector<std::string>{"premature_stop_product"});
  CHECK(b.summarize(Concept("power set"), {t, t, stop}, {}) ==
        arith::RulePack::builtin().find("power_minus_one")->misconception);
  ReasoningTrajectory bare;
  bare.final_answer = "1";
  CHECK(b.summarize(Concept("x"), {bare}, {}) == ScriptedBackend::kUnexplainedMisconception);
}

TEST_CASE("distractor prediction follows the named misconception") {
  ScriptedBackend b;
  const auto& pack = arith::RulePack::builtin();
  auto p = b.predict_distractor("Solve -5x < 10", "x > -2", {pack.find("inequality_no_flip")->misconception}, {});
  CHECK(p.answer == "x < -2");
  CHECK(p.trajectory.final_answer == p.answer);
  // A misconception that does not apply falls back to some applicable bug.
  auto q = b.predict_distractor("Solve -5x < 10", "x > -2", {pack.find("functions_swapped")->misconception}, {3});
  CHECK(q.answer != "x > -2");
  CHECK_FALSE(q.answer.empty());
  // Same seed, same fallback.
  CHECK(b.predict_distractor("Solve -5x < 10", "x > -2", {}, {3}).answer ==
        b.predict_distractor("Solve -5x < 10", "x > -2", {}, {3}).answer);
}
