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

#include "pdgen/serialization.hpp"

#include <sstream>

namespace pdgen {

void to_json(Json& j, const QARecord& v) {
  j = Json::object();
  j["record_id"] = v.record_id;
  j["student_id"] = v.student_id;
  j["stem"] = v.stem;
  j["correct_answer"] = v.correct_answer;
  j["chosen_answer"] = v.chosen_answer;
  if (v.options) j["options"] = *v.options;
  if (v.timestamp) j["timestamp"] = *v.timestamp;
}

void from_json(const Json& j, QARecord& v) {
  v.record_id = j.at("record_id").get<std::string>();
  v.student_id = j.at("student_id").get<std::string>();
  v.stem = j.at("stem").get<std::string>();
  v.correct_answer = j.at("correct_answer").get<std::string>();
  v.chosen_answer = j.value("chosen_answer", std::string());
  v.options.reset();
  v.timestamp.reset();
  if (j.contains("options") && !j["options"].is_null()) v.options = j["options"].get<std::vector<std::string>>();
  if (j.contains("timestamp") && !j["timestamp"].is_null()) v.timestamp = j["timestamp"].get<std::int64_t>();
}

void to_json(Json& j, const ReasoningStep& v) {
  j = Json::object();
  j["text"] = v.text;
  j["intermediate_result"] = v.intermediate_result;
  if (v.is_erroneous) j["is_erroneous"] = *v.is_erroneous;
  if (v.rule_id) j["rule_id"] = *v.rule_id;
}

void from_json(const Json& j, ReasoningStep& v) {
  v.text = j.at("text").get<std::string>();
  v.intermediate_result = j.at("intermediate_result").get<std::string>();
  v.is_erroneous.reset();
  v.rule_id.reset();
  if (j.contains("is_erroneous") && !j["is_erroneous"].is_null()) v.is_erroneous = j["is_erroneous"].get<bool>();
  if (j.contains("rule_id") && !j["rule_id"].is_null()) v.rule_id = j["rule_id"].get<std::string>();
}

void to_json(Json& j, const ReasoningTrajectory& v) {
  j = Json::object();
  j["steps"] = v.steps;
  j["final_answer"] = v.final_answer;
  j["source"] = std::string(to_string(v.source));
}

void from_json(const Json& j, ReasoningTrajectory& v) {
  v.steps = j.at("steps").get<std::vector<ReasoningStep>>();
  v.final_answer = j.at("final_answer").get<std::string>();
  v.source = trajectory_source_from_string(j.at("source").get<std::string>());
}

void to_json(Json& j, const SearchParams& v) {
  j = Json::object();
  j["max_depth"] = v.max_depth;
  j["branching"] = v.branching;
  j["exploration_constant"] = v.exploration_constant;
  j["iterations"] = v.iterations;
  j["plausibility_weight"] = v.plausibility_weight;
  j["rollout_cap"] = v.rollout_cap;
  j["seed"] = v.seed;
}

// Missing keys keep their current (default) values.
void from_json(const Json& j, SearchParams& v) {
  v.max_depth = j.value("max_depth", v.max_depth);
  v.branching = j.value("branching", v.branching);
  v.exploration_constant = j.value("exploration_constant", v.exploration_constant);
  v.iterations = j.value("iterations", v.iterations);
  v.plausibility_weight = j.value("plausibility_weight", v.plausibility_weight);
  v.rollout_cap = j.value("rollout_cap", v.rollout_cap);
  v.seed = j.value("seed", v.seed);
}

void to_json(Json& j, const Reward& v) {
  j = Json::object();
  j["match_score"] = v.match_score;
  j["plausibility"] = v.plausibility;
  j["total"] = v.total;
}

void from_json(const Json& j, Reward& v) {
  v.match_score = j.at("match_score").get<double>();
  v.plausibility = j.at("plausibility").get<double>();
  v.total = j.at("total").get<double>();
}

void to_json(Json& j, const SupportingTrajectory& v) {
  j = Json::object();
  j["record_id"] = v.record_id;
  j["trajectory"] = v.trajectory;
}

void from_json(const Json& j, SupportingTrajectory& v) {
  v.record_id = j.at("record_id").get<std::string>();
  v.trajectory = j.at("trajectory").get<ReasoningTrajectory>();
}

void to_json(Json& j, const MisconceptionEntry& v) {
  j = Json::object();
  j["concept"] = v.knowledge_concept.label();
  j["misconception"] = v.misconception;
  j["support_count"] = v.support_count;
  j["supporting_trajectories"] = v.supporting_trajectories;
}

void to_json(Json& j, const MisconceptionPrototype& v) {
  j = Json::object();
  j["student_id"] = v.student_id;
  j["entries"] = v.entries;
  j["unrecovered_record_ids"] = v.unrecovered_record_ids;
}

void from_json(const Json& j, MisconceptionPrototype& v) {
  v.student_id = j.at("student_id").get<std::string>();
  v.entries = j.at("entries").get<std::vector<MisconceptionEntry>>();
  v.unrecovered_record_ids = j.at("unrecovered_record_ids").get<std::vector<std::string>>();
}

void to_json(Json& j, const PersonalizedDistractor& v) {
  j = Json::object();
  j["question_record_id"] = v.question_record_id;
  j["distractor"] = v.distractor;
  Json used = Json::array();
  for (const auto& c : v.used_misconceptions) used.push_back(c.label());
  j["used_misconceptions"] = used;
  j["rationale_trajectory"] = v.rationale_trajectory;
}

void to_json(Json& j, const StudentDataset& v) {
  j = Json::object();
  j["student_id"] = v.student_id;
  j["past_records"] = v.past_records;
  j["test_records"] = v.test_records;
}

void from_json(const Json& j, StudentDataset& v) {
  v.student_id = j.at("student_id").get<std::string>();
  v.past_records = j.at("past_records").get<std::vector<QARecord>>();
  v.test_records = j.at("test_records").get<std::vector<QARecord>>();
}

void to_json(Json& j, const ValidationError& v) {
  j = Json::object();
  j["record_id"] = v.record_id;
  j["rule"] = v.rule;
  j["message"] = v.message;
}

std::string to_jsonl(const std::vector<QARecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += Json(record).dump();
    out += '\n';
  }
  return out;
}

std::vector<QARecord> records_from_jsonl(const std::string& text) {
  std::vector<QARecord> records;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(Json::parse(line).get<QARecord>());
    } catch (const Json::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace pdgen

namespace nlohmann {

pdgen::MisconceptionEntry adl_serializer<pdgen::MisconceptionEntry>::from_json(const pdgen::Json& j) {
  pdgen::MisconceptionEntry e{pdgen::Concept(j.at("concept").get<std::string>()),
                              j.at("misconception").get<std::string>(),
                              j.at("supporting_trajectories").get<std::vector<pdgen::SupportingTrajectory>>(),
                              j.at("support_count").get<int>()};
  return e;
}

pdgen::PersonalizedDistractor adl_serializer<pdgen::PersonalizedDistractor>::from_json(const pdgen::Json& j) {
  pdgen::PersonalizedDistractor d;
  d.question_record_id = j.at("question_record_id").get<std::string>();
  d.distractor = j.at("distractor").get<std::string>();
  for (const auto& c : j.at("used_misconceptions")) d.used_misconceptions.emplace_back(c.get<std::string>());
  d.rationale_trajectory = j.at("rationale_trajectory").get<pdgen::ReasoningTrajectory>();
  return d;
}

}  // namespace nlohmann
