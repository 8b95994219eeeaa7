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

// Rewrite rules over the arithmetic grammar, loaded from a JSON rule pack.
//
// A rule fires on a state when the state's stage is listed in `from`, the
// relation is in `rel_in` (if given) and every `when` guard holds. Firing
// evaluates every `set` expression against the old state simultaneously,
// optionally flips the relation, and moves to stage `to`. Step text and the
// value-stage expression are templates whose {placeholders} are arithmetic
// expressions over the old state's slots.
//
// Correct rules are tried in pack order; the first one that fires is the
// flawless next step. Buggy rewrite rules are faulty alternatives. Buggy
// stop rules make a student commit to the current value instead of taking
// another step; they never fire before the first step.
//
// Arithmetic slips ("slip+1", "slip-2", ...) are synthesized on demand:
// the correct step with its result value shifted by k. They pad erroneous
// candidate lists and are never assigned to synthetic students.

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdgen/arith.hpp"
#include "pdgen/domain.hpp"

namespace pdgen::arith {

class RulePackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic over slot names: + - * / ^, unary minus, parentheses.
class Expr {
 public:
  static Expr parse(std::string_view text);
  Rational eval(const State& state) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

struct Guard {
  Expr lhs;
  std::string op;  // == != < > <= >=
  Expr rhs;

  static Guard parse(std::string_view text);
  bool holds(const State& state) const;
};

enum class RuleKind { kRewrite, kStop };

struct Rule {
  std::string id;
  RuleKind kind = RuleKind::kRewrite;
  bool buggy = false;
  std::string concept_label;
  std::vector<Stage> from;
  std::optional<Stage> to;
  std::vector<std::string> rel_in;
  std::vector<Guard> when;
  std::vector<std::pair<std::string, Expr>> set;
  bool flip = false;
  std::string text;
  std::string show;
  std::string misconception;
};

// One rule firing: the step a student writes down and where it leads.
struct Application {
  std::string rule_id;
  bool erroneous = false;
  bool slip = false;
  ReasoningStep step;
  State next;
};

inline constexpr std::string_view kSlipPrefix = "slip";
std::string slip_rule_id(int delta);
std::optional<int> parse_slip_rule_id(std::string_view id);

class RulePack {
 public:
  // Validates ids, expressions and trigger coverage; throws RulePackError.
  static RulePack from_json_text(const std::string& text);
  static RulePack load_file(const std::string& path);
  // The pack shipped with the library (data/rulepack.json).
  static const RulePack& builtin();

  const std::string& name() const { return name_; }
  const std::vector<Rule>& correct_rules() const { return correct_; }
  const std::vector<Rule>& buggy_rules() const { return buggy_; }
  const Rule* find(std::string_view id) const;
  // Buggy rule whose canonical sentence equals `text` (after trimming).
  const Rule* find_by_misconception(std::string_view text) const;

  bool fires(const Rule& rule, const State& state) const;
  Application apply(const Rule& rule, const State& state) const;

  std::optional<Application> correct_step(const State& state) const;
  // Buggy rewrite rules that fire here, in pack order.
  std::vector<Application> buggy_steps(const State& state) const;
  std::optional<Application> slip_step(const State& state, int delta) const;

  // Re-derives the state after `steps`; nullopt when a step cannot be
  // produced by this pack from the state before it.
  std::optional<State> replay(const State& start, const std::vector<ReasoningStep>& steps) const;

  // Applies `rule_id` (pack rule or slip) to `state`.
  std::optional<Application> apply_id(std::string_view rule_id, const State& state) const;

  // Concepts of the correct rules used to solve `initial`, sorted, unique.
  std::vector<std::string> concepts_for(const State& initial, int cap = 32) const;

 private:
  void validate() const;

  std::string name_;
  std::vector<Rule> correct_;
  std::vector<Rule> buggy_;
};

// Step-by-step solution by a student whose buggy rules fire whenever
// their trigger matches. With no buggy rules this is the correct solution.
struct Solution {
  std::vector<Application> steps;
  State final_state;
  bool stopped = false;    // a stop rule committed the current value
  bool diverged = false;   // cap reached or no rule applicable
  std::vector<std::string> fired_buggy;  // ids, in firing order

  std::string answer() const;
  ReasoningTrajectory trajectory() const;
};

Solution solve(const RulePack& pack, const State& initial, const std::vector<const Rule*>& student_rules,
               int cap = 32);

}  // namespace pdgen::arith
