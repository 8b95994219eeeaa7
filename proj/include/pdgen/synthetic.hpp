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

// Rule-based synthetic students: each one applies its buggy rules whenever
// their trigger matches, and correct rules elsewhere.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgen/domain.hpp"
#include "pdgen/rulepack.hpp"

namespace pdgen {

struct SyntheticStudent {
  std::string student_id;
  std::vector<std::string> buggy_rule_ids;
};

// Empty when valid against `pack`.
std::string check_student(const SyntheticStudent& student, const arith::RulePack& pack);

struct StudentAnswer {
  ReasoningTrajectory trajectory;
  AnswerText answer;
  // Student rules that fired, in order.
  std::vector<std::string> fired_rules;
};

// Throws std::invalid_argument for stems outside the generator grammar.
StudentAnswer answer_question(const arith::RulePack& pack, const SyntheticStudent& student, const std::string& stem);

// The correct answer text for a generator stem.
AnswerText correct_answer(const arith::RulePack& pack, const std::string& stem);

class InsufficientTemplates : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateOptions {
  int n_students = 20;
  int n_past = 57;
  int n_test = 10;
  int rules_per_student = 1;
  std::uint64_t seed = 0;
  // When set, this share of students (rounded up) carries a stop rule; the
  // others draw from rewrite rules only. When unset, rules are drawn from
  // the whole buggy list.
  std::optional<double> premature_stop_fraction;
  int max_attempts = 100;  // per record slot
};

struct DroppedSlot {
  std::string student_id;
  std::string split;  // past | test
  int slot = 0;
};

struct SimulatedCorpus {
  std::vector<SyntheticStudent> students;
  std::vector<StudentDataset> datasets;
  std::vector<DroppedSlot> dropped;
};

SimulatedCorpus generate_dataset(const arith::RulePack& pack, const SimulateOptions& options);

// Records for `student` on the given stems; stems the student answers
// correctly are skipped.
std::vector<QARecord> records_for(const arith::RulePack& pack, const SyntheticStudent& student,
                                  const std::vector<std::string>& stems, const std::string& id_prefix);

// Random generator stems, deterministic in `seed`, that every student in
// `students` answers incorrectly. Throws InsufficientTemplates if fewer than
// `count` are found within the attempt budget.
std::vector<std::string> shared_error_stems(const arith::RulePack& pack, const std::vector<SyntheticStudent>& students,
                                            int count, std::uint64_t seed, int max_attempts = 20000);

// Group-level question: a shared stem with the students' actual distractors
// (top three by frequency).
struct GroupQuestion {
  std::string question_id;
  std::string stem;
  AnswerText correct_answer;
  std::vector<AnswerText> actual_distractors;
};

std::vector<GroupQuestion> make_group_questions(const arith::RulePack& pack,
                                                const std::vector<SyntheticStudent>& students, int count,
                                                std::uint64_t seed);

}  // namespace pdgen
