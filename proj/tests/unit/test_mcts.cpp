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


#include <cmath>
#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "pdgen/mcts.hpp"
#include "pdgen/scripted_backend.hpp"
#include "pdgen/synthetic.hpp"

using namespace pdgen;
using pdgen::testing::record;

namespace {

QARecord student_record(const std::string& rule, const std::string& stem, const std::string& id = "r1") {
  auto recs = records_for(arith::RulePack::builtin(), SyntheticStudent{"s1", {rule}}, {stem}, id + "-");
  REQUIRE(recs.size() == 1);
  return recs[0];
}

void walk(const TreeNode& n, const std::function<void(const TreeNode&)>& fn) {
  fn(n);
  for (const auto& c : n.children) walk(c, fn);
}

LoggedTrajectory logged(double r1, double r2, int steps) {
  LoggedTrajectory l;
  l.reward = Reward::make(r1 == 1.0, r2, 0.2);
  l.trajectory.steps.resize(steps, ReasoningStep{"s", "1", std::nullopt, std::nullopt});
  l.trajectory.final_answer = "1";
  return l;
}

// Proposals always fail, to exercise error propagation.
class BrokenBackend : public ScriptedBackend {
 public:
  StepProposal propose_children(const std::string&, const std::vector<ReasoningStep>&, int,
                                const CallContext&) const override {
    throw BackendError(BackendError::Kind::kRemoteUnavailable, "down");
  }
};

}  // namespace

TEST_CASE("uct score") {
  TreeNode c;
  CHECK(std::isinf(uct_score(c, 5, 1.0)));
  c.visit_count = 4;
  c.total_reward = 2.0;
  // 2/4 + sqrt(2) * sqrt(ln 10 / 4)
  CHECK(uct_score(c, 10, std::sqrt(2.0)) == doctest::Approx(1.5729830131).epsilon(1e-9));
  CHECK(uct_score(c, 1, 3.0) == doctest::Approx(0.5));
}

TEST_CASE("selection prefers unvisited children, ties to the earlier one") {
  TreeNode root;
  root.expanded = true;
  root.visit_count = 6;
  for (int i = 0; i < 3; ++i) {
    TreeNode c;
    c.depth = 1;
    c.visit_count = 2;
    c.total_reward = 1.0;
    root.children.push_back(c);
  }
  SearchParams p;
  auto path = select_path(root, p);
  REQUIRE(path.size() == 2);
  CHECK(path[1] == &root.children[0]);
  root.children[2].visit_count = 0;
  root.children[2].total_reward = 0;
  // Not fully expanded any more: selection stops at the root.
  CHECK(select_path(root, p).size() == 1);
  TreeNode term;
  term.kind = NodeKind::kTerminal;
  term.depth = 1;
  root.children[2].visit_count = 2;
  root.children.push_back(term);
  path = select_path(root, p);
  CHECK(path.back() == &root.children[3]);
}

TEST_CASE("selection stops at max depth") {
  TreeNode root;
  root.expanded = true;
  root.visit_count = 1;
  TreeNode c;
  c.depth = 1;
  c.visit_count = 1;
  root.children.push_back(c);
  root.children.push_back(c);
  SearchParams p;
  p.max_depth = 1;
  CHECK(select_path(root, p).size() == 2);
  p.max_depth = 0;
  CHECK(select_path(root, p).size() == 1);
}

TEST_CASE("best trajectory: matched, most plausible, shortest, earliest") {
  CHECK_FALSE(select_best({logged(0, 1.0, 1)}));
  CHECK(select_best({logged(0, 1.0, 1), logged(1, 0.4, 3), logged(1, 0.8, 3)}) == 2);
  CHECK(select_best({logged(1, 0.8, 3), logged(1, 0.8, 2)}) == 1);
  CHECK(select_best({logged(1, 0.8, 2), logged(1, 0.8, 2)}) == 0);
}

TEST_CASE("scoring") {
  ScriptedBackend b;
  SearchParams p;
  QARecord rec = student_record("inequality_no_flip", "Solve -2x < 6");
  ReasoningTrajectory t = answer_question(arith::RulePack::builtin(), SyntheticStudent{"s", {"inequality_no_flip"}},
                                          rec.stem).trajectory;
  Reward r = score_trajectory(t, false, rec, p, b, {});
  CHECK(r.match_score == 1.0);
  CHECK(r.plausibility == 1.0);
  CHECK(r.total == doctest::Approx(1.2));
  CHECK(score_trajectory(t, false, rec, p, b, {}, true).total == 1.0);
  CHECK(score_trajectory(t, true, rec, p, b, {}) == Reward::zero());
}

TEST_CASE("recovery finds a single-rule error") {
  ScriptedBackend b;
  SearchParams p;
  QARecord rec = student_record("inequality_no_flip", "Solve -2x < 6");
  RecoveryResult r = recover(rec, p, b);
  CHECK(r.matched);
  REQUIRE(r.best_trajectory);
  CHECK(r.best_trajectory->final_answer == "x < -3");
  CHECK(b.attribute_errors(*r.best_trajectory) == std::vector<std::string>{"inequality_no_flip"});
  CHECK(r.stats.iterations_run == p.iterations);
  CHECK(r.stats.root_visits >= p.iterations);
  CHECK(r.stats.root_visits <= 2 * p.iterations);
}

TEST_CASE("recovery is deterministic in the seed") {
  ScriptedBackend b;
  SearchParams p;
  QARecord rec = student_record("transposition_sign_kept", "Solve -3x + 5 >= -6");
  auto a = recover(rec, p, b);
  auto c = recover(rec, p, b);
  CHECK(a.best_trajectory == c.best_trajectory);
  REQUIRE(a.trajectory_log.size() == c.trajectory_log.size());
  for (size_t i = 0; i < a.trajectory_log.size(); ++i) {
    CHECK(a.trajectory_log[i].trajectory == c.trajectory_log[i].trajectory);
  }
}

TEST_CASE("a premature stop needs terminal nodes") {
  ScriptedBackend b;
  SearchParams p;
  p.iterations = 20;
  QARecord rec = student_record(
      "premature_stop_product",
      "How many binary relations are there from a set A with 3 elements to a set B with 4 elements?");
  RecoveryResult full = recover(rec, p, b);
  CHECK(full.matched);
  CHECK(full.best_trajectory->source == TrajectorySource::kTerminalStop);
  RecoveryResult ablated = recover(rec, p, b, {true, false});
  CHECK_FALSE(ablated.matched);
}

TEST_CASE("tree shape under the ablation switches") {
  ScriptedBackend b;
  SearchParams p;
  p.iterations = 15;
  QARecord rec = student_record("transposition_sign_kept", "Solve -3x + 5 >= -6");
  {
    SearchTree tree(rec, p, b, {true, false});
    for (int i = 0; i < p.iterations; ++i) tree.iterate();
    walk(tree.root(), [](const TreeNode& n) { CHECK_FALSE(n.is_terminal()); });
    // One pass per iteration without the concluded prefix.
    CHECK(tree.root().visit_count == p.iterations);
  }
  {
    SearchTree tree(rec, p, b, {false, true});
    for (int i = 0; i < p.iterations; ++i) tree.iterate();
    for (const auto& l : tree.log()) CHECK(l.reward.plausibility == 0.0);
    walk(tree.root(), [](const TreeNode& n) { CHECK(n.total_reward <= n.visit_count + 1e-9); });
  }
  {
    SearchTree tree(rec, p, b);
    for (int i = 0; i < p.iterations; ++i) tree.iterate();
    const TreeNode& root = tree.root();
    REQUIRE(root.children.size() == 3 + 1);
    CHECK(root.children.back().is_terminal());
    Json trace = tree.trace();
    CHECK(trace.contains("tree"));
  }
}

TEST_CASE("backend failures abort the search with stats") {
  BrokenBackend b;
  SearchParams p;
  QARecord rec = student_record("inequality_no_flip", "Solve -2x < 6");
  CHECK_THROWS_AS(recover(rec, p, b), RecoveryError);
}
