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

// Shared value types for the distractor pipeline. Everything here is an
// immutable-after-construction value; behavior is limited to validation.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdgen {

// Raw answer text. Equality of answers is decided by
// evaluation::answers_equivalent, never by string comparison.
using AnswerText = std::string;

struct QARecord {
  std::string record_id;
  std::string student_id;
  std::string stem;
  AnswerText correct_answer;
  AnswerText chosen_answer;
  std::optional<std::vector<AnswerText>> options;
  std::optional<std::int64_t> timestamp;

  friend bool operator==(const QARecord&, const QARecord&) = default;
};

struct StudentDataset {
  std::string student_id;
  std::vector<QARecord> past_records;
  std::vector<QARecord> test_records;

  friend bool operator==(const StudentDataset&, const StudentDataset&) = default;
};

// Lowercased, punctuation replaced by spaces, whitespace collapsed and
// trimmed.
std::string normalize_concept_label(std::string_view raw);

class Concept {
 public:
  // Throws std::invalid_argument when the label is empty after
  // normalization.
  explicit Concept(std::string_view raw);

  static std::optional<Concept> try_make(std::string_view raw);

  const std::string& label() const { return label_; }

  friend bool operator==(const Concept&, const Concept&) = default;
  friend auto operator<=>(const Concept&, const Concept&) = default;

 private:
  std::string label_;
};

struct ReasoningStep {
  std::string text;
  std::string intermediate_result;
  // Known for scripted and synthetic trajectories only.
  std::optional<bool> is_erroneous;
  // Rule that produced the step (scripted backend only).
  std::optional<std::string> rule_id;

  friend bool operator==(const ReasoningStep&, const ReasoningStep&) = default;
};

enum class TrajectorySource { kSimulation, kTerminalStop };

std::string_view to_string(TrajectorySource source);
TrajectorySource trajectory_source_from_string(std::string_view text);

struct ReasoningTrajectory {
  std::vector<ReasoningStep> steps;
  AnswerText final_answer;
  TrajectorySource source = TrajectorySource::kSimulation;

  friend bool operator==(const ReasoningTrajectory&, const ReasoningTrajectory&) = default;
};

// D, B, c, L, alpha plus the rollout cap and the search seed.
struct SearchParams {
  int max_depth = 5;
  int branching = 3;
  double exploration_constant = 1.4142135623730951;  // sqrt(2)
  int iterations = 10;
  double plausibility_weight = 0.2;
  int rollout_cap = 10;
  std::uint64_t seed = 0;

  // Empty when valid, otherwise the first violated constraint.
  std::string check() const;

  friend bool operator==(const SearchParams&, const SearchParams&) = default;
};

struct Reward {
  double match_score = 0.0;  // r1, 0 or 1
  double plausibility = 0.0;  // r2 in [0, 1]
  double total = 0.0;         // r1 + alpha * r2

  static Reward make(bool matched, double plausibility, double alpha) {
    double r1 = matched ? 1.0 : 0.0;
    return Reward{r1, plausibility, r1 + alpha * plausibility};
  }
  static Reward zero() { return Reward{}; }

  friend bool operator==(const Reward&, const Reward&) = default;
};

struct SupportingTrajectory {
  std::string record_id;
  ReasoningTrajectory trajectory;

  friend bool operator==(const SupportingTrajectory&, const SupportingTrajectory&) = default;
};

struct MisconceptionEntry {
  Concept knowledge_concept;
  std::string misconception;
  std::vector<SupportingTrajectory> supporting_trajectories;
  int support_count = 0;

  friend bool operator==(const MisconceptionEntry&, const MisconceptionEntry&) = default;
};

struct MisconceptionPrototype {
  std::string student_id;
  std::vector<MisconceptionEntry> entries;
  std::vector<std::string> unrecovered_record_ids;

  const MisconceptionEntry* find(const Concept& knowledge_concept) const;

  friend bool operator==(const MisconceptionPrototype&, const MisconceptionPrototype&) = default;
};

struct PersonalizedDistractor {
  std::string question_record_id;
  AnswerText distractor;
  ReasoningTrajectory rationale_trajectory;
  std::vector<Concept> used_misconceptions;

  friend bool operator==(const PersonalizedDistractor&, const PersonalizedDistractor&) = default;
};

struct ValidationError {
  std::string record_id;
  std::string rule;
  std::string message;

  friend bool operator==(const ValidationError&, const ValidationError&) = default;
};

// One error per violated invariant; empty means the dataset is well formed.
std::vector<ValidationError> validate_dataset(const StudentDataset& dataset);

// Structural checks on the remaining types. Each returns an empty string
// when the value is valid.
std::string check_trajectory(const ReasoningTrajectory& trajectory);
std::string check_prototype(const MisconceptionPrototype& prototype,
                            const std::vector<QARecord>& source_records);

}  // namespace pdgen
