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
#include "pdgen/domain.hpp"
#include "pdgen/serialization.hpp"

using namespace pdgen;
using pdgen::testing::record;

TEST_CASE("concept labels are normalized") {
  CHECK(normalize_concept_label("  Linear-Equations!! ") == "linear equations");
  CHECK(normalize_concept_label("Power\tSet") == "power set");
  CHECK(Concept("Cartesian Product.") == Concept("cartesian product"));
  CHECK_THROWS_AS(Concept(" ?! "), std::invalid_argument);
  CHECK_FALSE(Concept::try_make("..."));
  CHECK(Concept::try_make("x")->label() == "x");
}

TEST_CASE("search params check") {
  SearchParams p;
  CHECK(p.check().empty());
  p.branching = 1;
  CHECK_FALSE(p.check().empty());
  p = {};
  p.iterations = 0;
  CHECK_FALSE(p.check().empty());
  p = {};
  p.plausibility_weight = -0.1;
  CHECK_FALSE(p.check().empty());
  p = {};
  p.exploration_constant = 0;
  CHECK_FALSE(p.check().empty());
}

TEST_CASE("reward totals") {
  Reward r = Reward::make(true, 0.5, 0.2);
  CHECK(r.match_score == 1.0);
  CHECK(r.total == doctest::Approx(1.1));
  CHECK(Reward::make(false, 1.0, 0.2).total == doctest::Approx(0.2));
  CHECK(Reward::zero().total == 0.0);
}

TEST_CASE("dataset validation names each violation") {
  StudentDataset ds{"s1", {}, {}};
  ds.past_records.push_back(record("p1", "Solve x = 1", "x = 1", "x = 2"));
  ds.past_records.push_back(record("p1", "Solve x = 1", "x = 1", "x = 2"));
  ds.past_records.push_back(record("p2", "", "1", "", "s2"));
  ds.test_records.push_back(record("t1", "Solve 2x = 1", "x = 1/2", "x = 0.5"));
  auto errors = validate_dataset(ds);
  std::vector<std::string> rules;
  for (const auto& e : errors) rules.push_back(e.rule);
  CHECK(rules == std::vector<std::string>{"duplicate_record_id", "student_mismatch", "stem_empty",
                                          "chosen_answer_empty", "not_error_record"});
  StudentDataset ok{"s1", {record("a", "q", "1", "2")}, {record("b", "q", "1", "2")}};
  CHECK(validate_dataset(ok).empty());
}

TEST_CASE("trajectory and prototype checks") {
  ReasoningTrajectory t;
  CHECK_FALSE(check_trajectory(t).empty());
  t.final_answer = "3";
  CHECK_FALSE(check_trajectory(t).empty());
  t.source = TrajectorySource::kTerminalStop;
  CHECK(check_trajectory(t).empty());
  t.steps.push_back({"", "3", std::nullopt, std::nullopt});
  CHECK_FALSE(check_trajectory(t).empty());

  std::vector<QARecord> src{record("r1", "q", "1", "0.5")};
  ReasoningTrajectory good;
  good.final_answer = "1/2";
  good.steps.push_back({"halve", "1/2", false, std::nullopt});
  MisconceptionPrototype p{"s1", {{Concept("a"), "m", {{"r1", good}}, 1}}, {}};
  CHECK(check_prototype(p, src).empty());
  p.entries[0].support_count = 2;
  CHECK_FALSE(check_prototype(p, src).empty());
  p.entries[0].support_count = 1;
  p.entries.push_back(p.entries[0]);
  CHECK(check_prototype(p, src).find("duplicate concept") != std::string::npos);
  p.entries.pop_back();
  p.entries[0].supporting_trajectories[0].record_id = "zz";
  CHECK(check_prototype(p, src).find("unknown record") != std::string::npos);
}

TEST_CASE("records round trip through JSONL") {
  QARecord a = record("r1", "Solve 2x = 4", "x = 2", "x = 8");
  QARecord b = a;
  b.record_id = "r2";
  b.options = std::vector<std::string>{"x = 2", "x = 8"};
  b.timestamp = 1700000000;
  auto text = to_jsonl({a, b});
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  auto back = records_from_jsonl(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == a);
  CHECK(back[1] == b);
  CHECK(records_from_jsonl("\n\n").empty());
  CHECK_THROWS_WITH_AS(records_from_jsonl(text + "{not json}\n"), doctest::Contains("line 3"), std::runtime_error);
}

TEST_CASE("prototype JSON round trip") {
  ReasoningTrajectory t;
  t.steps.push_back({"2x = 4 so x = 4 - 2", "x = 2", true, "coefficient_subtracted"});
  t.final_answer = "x = 2";
  t.source = TrajectorySource::kTerminalStop;
  MisconceptionPrototype p{"s9", {{Concept("linear equations"), "subtracts", {{"r1", t}}, 1}}, {"r7"}};
  Json j = p;
  CHECK(j["entries"][0]["concept"] == "linear equations");
  MisconceptionPrototype back = j.get<MisconceptionPrototype>();
  CHECK(back == p);
  SearchParams sp;
  sp.iterations = 20;
  sp.seed = 99;
  CHECK(Json(sp).get<SearchParams>() == sp);
}

TEST_CASE("trajectory source names") {
  CHECK(trajectory_source_from_string(to_string(TrajectorySource::kTerminalStop)) == TrajectorySource::kTerminalStop);
  CHECK(trajectory_source_from_string(to_string(TrajectorySource::kSimulation)) == TrajectorySource::kSimulation);
  CHECK_THROWS_AS(trajectory_source_from_string("nope"), std::invalid_argument);
}
