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

// On-disk layout shared by the commands.
//
//   <dataset>/<student>.past.jsonl, <student>.test.jsonl   one record per line
//   <dataset>/past.jsonl, test.jsonl                       combined alternative
//   <dataset>/students.json                                synthetic ground truth
//   <prototypes>/<student>.json, build_report.json
//   <generations>                                          one line per question

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgen/distractor.hpp"
#include "pdgen/domain.hpp"
#include "pdgen/serialization.hpp"
#include "pdgen/synthetic.hpp"

namespace pdgen {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Creates parent directories, writes to a temporary sibling, then renames.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Sorted by student_id. Throws DataError if the directory is missing, holds
// no records, or a dataset fails validation.
std::vector<StudentDataset> read_dataset_dir(const std::string& dir);
void write_dataset_dir(const std::string& dir, const std::vector<StudentDataset>& datasets);

std::vector<SyntheticStudent> read_students(const std::string& path);
void write_students(const std::string& path, const std::vector<SyntheticStudent>& students);

std::string prototype_path(const std::string& dir, const std::string& student_id);
void write_prototype(const std::string& dir, const MisconceptionPrototype& prototype);
MisconceptionPrototype read_prototype(const std::string& dir, const std::string& student_id);

// One line per question: student_id, record_id, then either the distractor
// fields or "error".
struct GenerationLine {
  std::string student_id;
  GenerationOutcome outcome;
};

std::string generations_to_jsonl(const std::vector<GenerationLine>& lines);
std::vector<GenerationLine> generations_from_jsonl(const std::string& text);

std::string group_questions_to_jsonl(const std::vector<GroupQuestion>& questions);
std::vector<GroupQuestion> group_questions_from_jsonl(const std::string& text);

// Pretty JSON with a trailing newline; the form of every JSON document written.
std::string dump_document(const Json& j);

}  // namespace pdgen
