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

#include "pdgen/dataset_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace pdgen {
namespace {

constexpr std::string_view kPastSuffix = ".past.jsonl";
constexpr std::string_view kTestSuffix = ".test.jsonl";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::vector<QARecord> read_records(const fs::path& path) {
  try {
    return records_from_jsonl(read_file(path.string()));
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

template <typename F>
void parse_lines(const std::string& text, F&& each) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      each(Json::parse(line));
    } catch (const Json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

std::string dump_document(const Json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw DataError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw DataError("write failed for " + tmp.string());
  }
  fs::rename(tmp, p, ec);
  if (ec) throw DataError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<StudentDataset> read_dataset_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("dataset directory not found: " + dir);
  std::map<std::string, StudentDataset> by_student;
  auto slot = [&](const std::string& id) -> StudentDataset& {
    StudentDataset& ds = by_student[id];
    ds.student_id = id;
    return ds;
  };

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    const bool combined_past = name == "past.jsonl";
    const bool combined_test = name == "test.jsonl";
    if (combined_past || combined_test) {
      for (auto& r : read_records(path)) {
        if (r.student_id.empty()) throw DataError(path.string() + ": record " + r.record_id + " has no student_id");
        auto& ds = slot(r.student_id);
        (combined_past ? ds.past_records : ds.test_records).push_back(std::move(r));
      }
    } else if (ends_with(name, kPastSuffix) || ends_with(name, kTestSuffix)) {
      const bool past = ends_with(name, kPastSuffix);
      const std::string id = name.substr(0, name.size() - (past ? kPastSuffix : kTestSuffix).size());
      auto& ds = slot(id);
      for (auto& r : read_records(path)) {
        if (r.student_id.empty()) r.student_id = id;
        if (r.student_id != id) {
          throw DataError(path.string() + ": record " + r.record_id + " belongs to student " + r.student_id);
        }
        (past ? ds.past_records : ds.test_records).push_back(std::move(r));
      }
    }
  }
  if (by_student.empty()) throw DataError("no dataset files in " + dir);

  std::vector<StudentDataset> out;
  for (auto& [id, ds] : by_student) {
    auto errors = validate_dataset(ds);
    if (!errors.empty()) {
      const auto& e = errors.front();
      throw DataError("student " + id + ": record " + e.record_id + ": " + e.message + " (" +
                      std::to_string(errors.size()) + " violation(s))");
    }
    out.push_back(std::move(ds));
  }
  return out;
}

void write_dataset_dir(const std::string& dir, const std::vector<StudentDataset>& datasets) {
  for (const auto& ds : datasets) {
    write_file_atomic((fs::path(dir) / (ds.student_id + std::string(kPastSuffix))).string(), to_jsonl(ds.past_records));
    write_file_atomic((fs::path(dir) / (ds.student_id + std::string(kTestSuffix))).string(), to_jsonl(ds.test_records));
  }
}

std::vector<SyntheticStudent> read_students(const std::string& path) {
  std::vector<SyntheticStudent> out;
  try {
    Json j = Json::parse(read_file(path));
    for (const auto& s : j.at("students")) {
      out.push_back({s.at("student_id").get<std::string>(), s.at("buggy_rule_ids").get<std::vector<std::string>>()});
    }
  } catch (const Json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return out;
}

void write_students(const std::string& path, const std::vector<SyntheticStudent>& students) {
  Json list = Json::array();
  for (const auto& s : students) list.push_back(Json{{"student_id", s.student_id}, {"buggy_rule_ids", s.buggy_rule_ids}});
  write_file_atomic(path, dump_document(Json{{"students", list}}));
}

std::string prototype_path(const std::string& dir, const std::string& student_id) {
  return (fs::path(dir) / (student_id + ".json")).string();
}

void write_prototype(const std::string& dir, const MisconceptionPrototype& prototype) {
  write_file_atomic(prototype_path(dir, prototype.student_id), dump_document(Json(prototype)));
}

MisconceptionPrototype read_prototype(const std::string& dir, const std::string& student_id) {
  const std::string path = prototype_path(dir, student_id);
  if (!fs::exists(path)) throw DataError("prototype not found: " + path);
  try {
    return Json::parse(read_file(path)).get<MisconceptionPrototype>();
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string generations_to_jsonl(const std::vector<GenerationLine>& lines) {
  std::string out;
  for (const auto& line : lines) {
    Json j;
    j["student_id"] = line.student_id;
    j["record_id"] = line.outcome.record_id;
    if (const auto& d = line.outcome.distractor) {
      j["distractor"] = d->distractor;
      Json used = Json::array();
      for (const auto& c : d->used_misconceptions) used.push_back(c.label());
      j["used_misconceptions"] = std::move(used);
      j["rationale_trajectory"] = d->rationale_trajectory;
    } else {
      j["error"] = line.outcome.error;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<GenerationLine> generations_from_jsonl(const std::string& text) {
  std::vector<GenerationLine> out;
  parse_lines(text, [&](const Json& j) {
    GenerationLine line;
    line.student_id = j.at("student_id").get<std::string>();
    line.outcome.record_id = j.at("record_id").get<std::string>();
    if (j.contains("distractor")) {
      PersonalizedDistractor d;
      d.question_record_id = line.outcome.record_id;
      d.distractor = j.at("distractor").get<std::string>();
      for (const auto& c : j.at("used_misconceptions")) d.used_misconceptions.emplace_back(c.get<std::string>());
      d.rationale_trajectory = j.at("rationale_trajectory").get<ReasoningTrajectory>();
      line.outcome.distractor = std::move(d);
    } else {
      line.outcome.error = j.at("error").get<std::string>();
    }
    out.push_back(std::move(line));
  });
  return out;
}

std::string group_questions_to_jsonl(const std::vector<GroupQuestion>& questions) {
  std::string out;
  for (const auto& q : questions) {
    Json j;
    j["question_id"] = q.question_id;
    j["stem"] = q.stem;
    j["correct_answer"] = q.correct_answer;
    j["actual_distractors"] = q.actual_distractors;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<GroupQuestion> group_questions_from_jsonl(const std::string& text) {
  std::vector<GroupQuestion> out;
  parse_lines(text, [&](const Json& j) {
    out.push_back({j.at("question_id").get<std::string>(), j.at("stem").get<std::string>(),
                   j.at("correct_answer").get<std::string>(),
                   j.at("actual_distractors").get<std::vector<std::string>>()});
  });
  return out;
}

}  // namespace pdgen
