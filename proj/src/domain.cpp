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

#include "pdgen/domain.hpp"

#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pdgen/evaluation.hpp"

namespace pdgen {

std::string normalize_concept_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    auto uch = static_cast<unsigned char>(ch);
    if (std::isspace(uch) || std::ispunct(uch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(uch)));
  }
  return out;
}

Concept::Concept(std::string_view raw) : label_(normalize_concept_label(raw)) {
  if (label_.empty()) throw std::invalid_argument("concept label is empty after normalization");
}

std::optional<Concept> Concept::try_make(std::string_view raw) {
  if (normalize_concept_label(raw).empty()) return std::nullopt;
  return Concept(raw);
}

std::string_view to_string(TrajectorySource source) {
  return source == TrajectorySource::kSimulation ? "simulation" : "terminal_stop";
}

TrajectorySource trajectory_source_from_string(std::string_view text) {
  if (text == "simulation") return TrajectorySource::kSimulation;
  if (text == "terminal_stop") return TrajectorySource::kTerminalStop;
  throw std::invalid_argument("unknown trajectory source '" + std::string(text) + "'");
}

std::string SearchParams::check() const {
  if (max_depth < 1) return "max_depth must be positive";
  if (branching < 2) return "branching must be at least 2";
  if (!(exploration_constant > 0)) return "exploration_constant must be positive";
  if (iterations < 1) return "iterations must be positive";
  if (!(plausibility_weight >= 0)) return "plausibility_weight must be non-negative";
  if (rollout_cap < 1) return "rollout_cap must be positive";
  return {};
}

const MisconceptionEntry* MisconceptionPrototype::find(const Concept& knowledge_concept) const {
  for (const auto& entry : entries) {
    if (entry.knowledge_concept == knowledge_concept) return &entry;
  }
  return nullptr;
}

std::vector<ValidationError> validate_dataset(const StudentDataset& dataset) {
  std::vector<ValidationError> errors;
  std::unordered_set<std::string> seen;

  auto check_record = [&](const QARecord& record, bool is_test) {
    if (record.record_id.empty()) {
      errors.push_back({record.record_id, "record_id_empty", "record has an empty record_id"});
    } else if (!seen.insert(record.record_id).second) {
      errors.push_back({record.record_id, "duplicate_record_id", "duplicate id '" + record.record_id + "'"});
    }
    if (record.student_id != dataset.student_id) {
      errors.push_back({record.record_id, "student_mismatch",
                        "record belongs to '" + record.student_id + "', dataset is '" + dataset.student_id + "'"});
    }
    if (record.stem.empty()) errors.push_back({record.record_id, "stem_empty", "record has an empty stem"});
    if (record.correct_answer.empty()) {
      errors.push_back({record.record_id, "correct_answer_empty", "record has an empty correct_answer"});
    }
    if (record.chosen_answer.empty()) {
      errors.push_back({record.record_id, "chosen_answer_empty", "record has an empty chosen_answer"});
    }
    if (is_test && evaluation::answers_equivalent(record.chosen_answer, record.correct_answer)) {
      errors.push_back({record.record_id, "not_error_record",
                        "test record " + record.record_id + " not an error record"});
    }
  };

  for (const auto& record : dataset.past_records) check_record(record, false);
  for (const auto& record : dataset.test_records) check_record(record, true);
  return errors;
}

std::string check_trajectory(const ReasoningTrajectory& trajectory) {
  if (trajectory.final_answer.empty()) return "final_answer is empty";
  if (trajectory.steps.empty() && trajectory.source != TrajectorySource::kTerminalStop) {
    return "simulated trajectory has no steps";
  }
  for (const auto& step : trajectory.steps) {
    if (step.text.empty()) return "step with empty text";
  }
  return {};
}

std::string check_prototype(const MisconceptionPrototype& prototype, const std::vector<QARecord>& source_records) {
  std::unordered_map<std::string, const QARecord*> by_id;
  for (const auto& record : source_records) by_id.emplace(record.record_id, &record);
  std::set<std::string> concepts;
  for (const auto& entry : prototype.entries) {
    if (!concepts.insert(entry.knowledge_concept.label()).second) return "duplicate concept '" + entry.knowledge_concept.label() + "'";
    if (entry.support_count < 1) return "entry '" + entry.knowledge_concept.label() + "' has no support";
    if (entry.support_count != static_cast<int>(entry.supporting_trajectories.size())) {
      return "entry '" + entry.knowledge_concept.label() + "' support_count does not match its trajectories";
    }
    for (const auto& support : entry.supporting_trajectories) {
      auto it = by_id.find(support.record_id);
      if (it == by_id.end()) return "supporting trajectory for unknown record '" + support.record_id + "'";
      if (!evaluation::answers_equivalent(support.trajectory.final_answer, it->second->chosen_answer)) {
        return "trajectory for '" + support.record_id + "' does not reach the chosen answer";
      }
    }
  }
  return {};
}

}  // namespace pdgen
