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

#include "pdgen/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <filesystem>
#include <map>

#include "pdgen/dataset_io.hpp"
#include "pdgen/distractor.hpp"
#include "pdgen/evaluation.hpp"
#include "pdgen/prototype.hpp"
#include "pdgen/rng.hpp"
#include "pdgen/synthetic.hpp"

#ifndef PDGEN_VERSION_STRING
#define PDGEN_VERSION_STRING "0.0.0"
#endif

namespace fs = std::filesystem;

namespace pdgen {
namespace {

constexpr int kGroupTopK = 3;
constexpr const char* kStudentsFile = "students.json";
constexpr const char* kBuildReportFile = "build_report.json";

std::map<std::string, std::string> load_prompt_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw PipelineError("prompt directory not found: " + dir);
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      out[entry.path().stem().string()] = read_file(entry.path().string());
    }
  }
  return out;
}

std::vector<std::string> outputs_of(const std::string& command, const Config& c) {
  if (command == "simulate") return {c.paths.dataset, c.paths.group_questions};
  if (command == "build") return {c.paths.prototypes};
  if (command == "generate") return {c.paths.generations};
  if (command == "evaluate") return {c.paths.evaluation};
  return {c.paths.group_output};
}

void write_manifest(const std::string& command, const Config& config, const Json& summary, double wall_time_s) {
  Json m;
  m["command"] = command;
  m["version"] = version_string();
  m["seed"] = config.search.seed;
  m["backend"] = config.backend.kind;
  m["preset"] = config.preset;
  m["wall_time_s"] = wall_time_s;
  m["outputs"] = outputs_of(command, config);
  m["summary"] = summary;
  m["config"] = config.snapshot;
  write_file_atomic((fs::path(config.paths.manifests) / (command + ".json")).string(), dump_document(m));
}

std::vector<StudentDataset> datasets_of(const Config& c) { return read_dataset_dir(c.paths.dataset); }

// Removes dataset files from an earlier simulation so stale students do not
// linger. Other files are left alone.
void clear_dataset_files(const std::string& dir) {
  if (!fs::is_directory(dir)) return;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    auto ends = [&](std::string_view s) { return name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0; };
    if (entry.is_regular_file() && (ends(".past.jsonl") || ends(".test.jsonl"))) fs::remove(entry.path());
  }
}

}  // namespace

const char* version_string() { return PDGEN_VERSION_STRING; }

std::unique_ptr<ModelBackend> backend_for(const Config& config) {
  BackendConfig bc = config.backend;
  if (!config.prompt_dir.empty()) {
    for (auto& [op, text] : load_prompt_dir(config.prompt_dir)) bc.prompt_templates[op] = std::move(text);
  }
  try {
    return make_backend(bc);
  } catch (const std::exception& e) {
    throw PipelineError(std::string("backend: ") + e.what());
  }
}

std::shared_ptr<const arith::RulePack> rulepack_for(const Config& config) {
  try {
    if (config.backend.rulepack_path.empty()) {
      return std::shared_ptr<const arith::RulePack>(&arith::RulePack::builtin(), [](const arith::RulePack*) {});
    }
    return std::make_shared<const arith::RulePack>(arith::RulePack::load_file(config.backend.rulepack_path));
  } catch (const std::exception& e) {
    throw PipelineError(std::string("rule pack: ") + e.what());
  }
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate", "build", "generate", "evaluate", "group"};
  return names;
}

Json cmd_simulate(const Config& config) {
  auto pack = rulepack_for(config);
  SimulateOptions o;
  o.n_students = config.simulate.n_students;
  o.n_past = config.simulate.n_past;
  o.n_test = config.simulate.n_test;
  o.rules_per_student = config.simulate.rules_per_student;
  o.premature_stop_fraction = config.simulate.premature_stop_fraction;
  o.seed = config.search.seed;
  SimulatedCorpus corpus;
  std::vector<GroupQuestion> questions;
  try {
    corpus = generate_dataset(*pack, o);
    questions = make_group_questions(*pack, corpus.students, config.simulate.group_questions,
                                     derive_seed(config.search.seed, "group-questions"));
  } catch (const std::invalid_argument& e) {
    throw PipelineError(std::string("simulate: ") + e.what());
  } catch (const InsufficientTemplates& e) {
    throw PipelineError(std::string("simulate: ") + e.what());
  }

  clear_dataset_files(config.paths.dataset);
  write_dataset_dir(config.paths.dataset, corpus.datasets);
  write_students((fs::path(config.paths.dataset) / kStudentsFile).string(), corpus.students);
  write_file_atomic(config.paths.group_questions, group_questions_to_jsonl(questions));

  Json s;
  int past = 0, test = 0;
  for (const auto& ds : corpus.datasets) {
    past += static_cast<int>(ds.past_records.size());
    test += static_cast<int>(ds.test_records.size());
  }
  s["students"] = corpus.students.size();
  s["past_records"] = past;
  s["test_records"] = test;
  s["group_questions"] = questions.size();
  Json dropped = Json::array();
  for (const auto& d : corpus.dropped) dropped.push_back(Json{{"student_id", d.student_id}, {"split", d.split}, {"slot", d.slot}});
  s["dropped_slots"] = std::move(dropped);
  return s;
}

Json cmd_build(const Config& config) {
  auto datasets = datasets_of(config);
  auto backend = backend_for(config);
  BuildOptions options;
  options.flags = config.flags;
  options.workers = config.workers;
  options.keep_traces = !config.paths.traces.empty();

  Json reports = Json::array();
  int records = 0, recovered = 0, failed = 0;
  for (const auto& ds : datasets) {
    BuildResult r = build_prototype(ds, config.search, *backend, options);
    write_prototype(config.paths.prototypes, r.prototype);
    if (options.keep_traces) {
      write_file_atomic((fs::path(config.paths.traces) / (ds.student_id + ".json")).string(),
                        dump_document(Json(r.traces)));
    }
    spdlog::info("{}: recovered {}/{} records", ds.student_id, r.report.recovered, r.report.records);
    records += r.report.records;
    recovered += r.report.recovered;
    failed += r.report.failed;
    reports.push_back(report_to_json(r.report));
  }
  Json s;
  s["students"] = datasets.size();
  s["records"] = records;
  s["recovered"] = recovered;
  s["failed"] = failed;
  s["recovery_rate"] = records > 0 ? double(recovered) / records : 0.0;
  Json report = s;
  report["per_student"] = reports;
  write_file_atomic((fs::path(config.paths.prototypes) / kBuildReportFile).string(), dump_document(report));
  return s;
}

Json cmd_generate(const Config& config) {
  auto datasets = datasets_of(config);
  auto backend = backend_for(config);
  GenerateOptions options{config.flags.no_concept, config.search.seed};
  std::vector<GenerationLine> lines;
  int failures = 0;
  for (const auto& ds : datasets) {
    MisconceptionPrototype proto = read_prototype(config.paths.prototypes, ds.student_id);
    for (auto& outcome : generate_batch(ds.test_records, proto, *backend, options, config.workers)) {
      if (!outcome.distractor) {
        ++failures;
        spdlog::warn("{}: generation failed: {}", outcome.record_id, outcome.error);
      }
      lines.push_back({ds.student_id, std::move(outcome)});
    }
  }
  write_file_atomic(config.paths.generations, generations_to_jsonl(lines));
  Json s;
  s["questions"] = lines.size();
  s["generated"] = lines.size() - failures;
  s["failures"] = failures;
  return s;
}

Json cmd_evaluate(const Config& config) {
  auto datasets = datasets_of(config);
  if (!fs::exists(config.paths.generations)) throw PipelineError("generations file not found: " + config.paths.generations);
  std::map<std::string, std::vector<evaluation::Prediction>> by_student;
  int failures = 0;
  for (const auto& line : generations_from_jsonl(read_file(config.paths.generations))) {
    if (!line.outcome.distractor) {
      ++failures;
      continue;
    }
    by_student[line.student_id].push_back({line.outcome.record_id, line.outcome.distractor->distractor});
  }

  Json per = Json::array();
  int total = 0;
  double matched = 0.0, macro = 0.0;
  int evaluated = 0;
  for (const auto& ds : datasets) {
    if (ds.test_records.empty()) continue;
    double acc = 0.0;
    try {
      acc = evaluation::accuracy(by_student[ds.student_id], ds.test_records);
    } catch (const evaluation::EvaluationError& e) {
      throw PipelineError("evaluate " + ds.student_id + ": " + e.what());
    }
    const int n = static_cast<int>(ds.test_records.size());
    per.push_back(Json{{"student_id", ds.student_id}, {"questions", n}, {"accuracy", acc}});
    total += n;
    matched += acc * n;
    macro += acc;
    ++evaluated;
  }
  if (evaluated == 0) throw PipelineError("evaluate: no test records");

  Json s;
  s["questions"] = total;
  s["generation_failures"] = failures;
  s["micro_accuracy"] = matched / total;
  s["macro_accuracy"] = macro / evaluated;
  Json doc = s;
  doc["per_student"] = std::move(per);
  if (fs::exists(config.paths.group_output)) {
    Json group = Json::parse(read_file(config.paths.group_output));
    doc["group_mean_recall"] = group.at("mean_recall");
    s["group_mean_recall"] = group.at("mean_recall");
  }
  write_file_atomic(config.paths.evaluation, dump_document(doc));
  return s;
}

Json cmd_group(const Config& config) {
  auto datasets = datasets_of(config);
  if (!fs::exists(config.paths.group_questions)) {
    throw PipelineError("group questions file not found: " + config.paths.group_questions);
  }
  auto questions = group_questions_from_jsonl(read_file(config.paths.group_questions));
  if (questions.empty()) throw PipelineError("group: no questions in " + config.paths.group_questions);
  auto backend = backend_for(config);
  GenerateOptions options{config.flags.no_concept, config.search.seed};

  std::vector<QARecord> records;
  for (const auto& q : questions) {
    QARecord r;
    r.record_id = q.question_id;
    r.stem = q.stem;
    r.correct_answer = q.correct_answer;
    records.push_back(std::move(r));
  }
  std::map<std::string, std::vector<AnswerText>> per_question;
  int failures = 0;
  for (const auto& ds : datasets) {
    MisconceptionPrototype proto = read_prototype(config.paths.prototypes, ds.student_id);
    for (const auto& outcome : generate_batch(records, proto, *backend, options, config.workers)) {
      if (outcome.distractor) {
        per_question[outcome.record_id].push_back(outcome.distractor->distractor);
      } else {
        ++failures;
      }
    }
  }
  auto top = evaluation::aggregate_group(per_question, kGroupTopK);

  Json items = Json::array();
  double recall_sum = 0.0;
  int scored = 0;
  for (const auto& q : questions) {
    Json item;
    item["question_id"] = q.question_id;
    item["stem"] = q.stem;
    item["generated"] = top.count(q.question_id) ? top.at(q.question_id) : std::vector<AnswerText>{};
    item["actual"] = q.actual_distractors;
    if (!q.actual_distractors.empty()) {
      double r = evaluation::recall(item["generated"].get<std::vector<AnswerText>>(), q.actual_distractors);
      item["recall"] = r;
      recall_sum += r;
      ++scored;
    }
    items.push_back(std::move(item));
  }
  Json s;
  s["k"] = kGroupTopK;
  s["questions"] = questions.size();
  s["students"] = datasets.size();
  s["generation_failures"] = failures;
  s["mean_recall"] = scored > 0 ? recall_sum / scored : 0.0;
  Json doc = s;
  doc["per_question"] = std::move(items);
  write_file_atomic(config.paths.group_output, dump_document(doc));
  return s;
}

Json run_command(const std::string& command, const Config& config) {
  if (command == "run") {
    // group before evaluate so the evaluation picks up the group recall.
    Json all = Json::object();
    for (const char* name : {"simulate", "build", "generate", "group", "evaluate"}) all[name] = run_command(name, config);
    return all;
  }
  const auto t0 = std::chrono::steady_clock::now();
  Json summary;
  try {
    if (command == "simulate") {
      summary = cmd_simulate(config);
    } else if (command == "build") {
      summary = cmd_build(config);
    } else if (command == "generate") {
      summary = cmd_generate(config);
    } else if (command == "evaluate") {
      summary = cmd_evaluate(config);
    } else if (command == "group") {
      summary = cmd_group(config);
    } else {
      throw PipelineError("unknown command " + command);
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const DataError& e) {
    throw PipelineError(e.what());
  } catch (const Json::exception& e) {
    throw PipelineError(command + ": malformed JSON: " + e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(command, config, summary, wall);
  return summary;
}

}  // namespace pdgen
