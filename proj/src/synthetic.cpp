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

#include "pdgen/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "pdgen/evaluation.hpp"
#include "pdgen/rng.hpp"

namespace pdgen {
namespace {

// Random problems tried per family when deciding where a student can err.
constexpr int kRelevanceProbes = 256;

std::vector<const arith::Rule*> rules_of(const arith::RulePack& pack, const SyntheticStudent& student) {
  std::vector<const arith::Rule*> out;
  for (const auto& id : student.buggy_rule_ids) {
    const arith::Rule* r = pack.find(id);
    if (!r || !r->buggy) throw std::invalid_argument("student " + student.student_id + ": unknown buggy rule " + id);
    out.push_back(r);
  }
  return out;
}

std::string padded(int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*d", width, value);
  return buf;
}

bool answers_wrong(const StudentAnswer& a, const AnswerText& correct) {
  return !a.answer.empty() && !evaluation::answers_equivalent(a.answer, correct);
}

// Families in which the student errs on at least one probe problem.
std::vector<arith::Family> error_families(const arith::RulePack& pack, const SyntheticStudent& student) {
  std::vector<arith::Family> out;
  for (arith::Family f : arith::kAllFamilies) {
    Rng probe(derive_seed(0x5eedULL, static_cast<std::uint64_t>(f)));
    for (int i = 0; i < kRelevanceProbes; ++i) {
      std::string stem = arith::render_stem(arith::random_problem(f, probe));
      if (answers_wrong(answer_question(pack, student, stem), correct_answer(pack, stem))) {
        out.push_back(f);
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::string check_student(const SyntheticStudent& student, const arith::RulePack& pack) {
  if (student.student_id.empty()) return "student_id is empty";
  if (student.buggy_rule_ids.empty()) return "student " + student.student_id + " has no buggy rules";
  for (const auto& id : student.buggy_rule_ids) {
    const arith::Rule* r = pack.find(id);
    if (!r || !r->buggy) return "student " + student.student_id + ": unknown buggy rule " + id;
  }
  return {};
}

StudentAnswer answer_question(const arith::RulePack& pack, const SyntheticStudent& student, const std::string& stem) {
  auto start = arith::parse_stem(stem);
  if (!start) throw std::invalid_argument("stem not in the generator grammar: " + stem);
  arith::Solution sol = arith::solve(pack, *start, rules_of(pack, student));
  StudentAnswer out;
  out.trajectory = sol.trajectory();
  out.answer = sol.answer();
  out.fired_rules = sol.fired_buggy;
  return out;
}

AnswerText correct_answer(const arith::RulePack& pack, const std::string& stem) {
  auto start = arith::parse_stem(stem);
  if (!start) throw std::invalid_argument("stem not in the generator grammar: " + stem);
  return arith::solve(pack, *start, {}).answer();
}

SimulatedCorpus generate_dataset(const arith::RulePack& pack, const SimulateOptions& o) {
  if (o.n_students <= 0 || o.n_past < 0 || o.n_test < 0 || o.rules_per_student <= 0 || o.max_attempts <= 0) {
    throw std::invalid_argument("simulation counts must be positive");
  }
  std::vector<std::string> rewrite_ids, stop_ids, all_ids;
  for (const auto& r : pack.buggy_rules()) {
    (r.kind == arith::RuleKind::kStop ? stop_ids : rewrite_ids).push_back(r.id);
    all_ids.push_back(r.id);
  }
  if (o.rules_per_student > static_cast<int>(all_ids.size())) {
    throw std::invalid_argument("rules_per_student exceeds the number of buggy rules");
  }

  Rng rng(o.seed);
  std::set<size_t> stop_students;
  if (o.premature_stop_fraction) {
    double f = std::clamp(*o.premature_stop_fraction, 0.0, 1.0);
    size_t k = std::min<size_t>(o.n_students, static_cast<size_t>(std::ceil(f * o.n_students - 1e-9)));
    if (k > 0 && stop_ids.empty()) throw InsufficientTemplates("rule pack has no stop rule");
    for (size_t i : rng.sample(o.n_students, k)) stop_students.insert(i);
  }

  SimulatedCorpus corpus;
  for (int i = 0; i < o.n_students; ++i) {
    SyntheticStudent s;
    s.student_id = "s" + padded(i + 1, 3);
    if (stop_students.count(i)) s.buggy_rule_ids.push_back(stop_ids[rng.index(stop_ids.size())]);
    std::vector<std::string> pool = o.premature_stop_fraction ? rewrite_ids : all_ids;
    pool.erase(std::remove_if(pool.begin(), pool.end(),
                              [&](const std::string& id) {
                                return std::find(s.buggy_rule_ids.begin(), s.buggy_rule_ids.end(), id) !=
                                       s.buggy_rule_ids.end();
                              }),
               pool.end());
    while (static_cast<int>(s.buggy_rule_ids.size()) < o.rules_per_student) {
      if (pool.empty()) throw std::invalid_argument("rules_per_student exceeds the available buggy rules");
      size_t pick = rng.index(pool.size());
      s.buggy_rule_ids.push_back(pool[pick]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    corpus.students.push_back(std::move(s));
  }

  for (const auto& student : corpus.students) {
    std::vector<arith::Family> families = error_families(pack, student);
    if (families.empty()) {
      throw InsufficientTemplates("no generator family produces an error for student " + student.student_id);
    }
    Rng srng(derive_seed(o.seed, student.student_id));
    std::set<std::string> used;
    StudentDataset ds;
    ds.student_id = student.student_id;
    auto fill = [&](const std::string& split, int count, std::vector<QARecord>& out) {
      for (int slot = 0; slot < count; ++slot) {
        bool filled = false;
        for (int attempt = 0; attempt < o.max_attempts && !filled; ++attempt) {
          arith::Family f = families[srng.index(families.size())];
          std::string stem = arith::render_stem(arith::random_problem(f, srng));
          if (used.count(stem)) continue;
          StudentAnswer a = answer_question(pack, student, stem);
          AnswerText correct = correct_answer(pack, stem);
          if (!answers_wrong(a, correct)) continue;
          used.insert(stem);
          QARecord r;
          r.record_id = student.student_id + "-" + split.substr(0, 1) + padded(static_cast<int>(out.size()) + 1, 3);
          r.student_id = student.student_id;
          r.stem = stem;
          r.correct_answer = correct;
          r.chosen_answer = a.answer;
          out.push_back(std::move(r));
          filled = true;
        }
        if (!filled) corpus.dropped.push_back({student.student_id, split, slot});
      }
    };
    fill("past", o.n_past, ds.past_records);
    fill("test", o.n_test, ds.test_records);
    corpus.datasets.push_back(std::move(ds));
  }
  return corpus;
}

std::vector<QARecord> records_for(const arith::RulePack& pack, const SyntheticStudent& student,
                                  const std::vector<std::string>& stems, const std::string& id_prefix) {
  std::vector<QARecord> out;
  for (size_t i = 0; i < stems.size(); ++i) {
    StudentAnswer a = answer_question(pack, student, stems[i]);
    AnswerText correct = correct_answer(pack, stems[i]);
    if (!answers_wrong(a, correct)) continue;
    QARecord r;
    r.record_id = id_prefix + padded(static_cast<int>(i) + 1, 3);
    r.student_id = student.student_id;
    r.stem = stems[i];
    r.correct_answer = correct;
    r.chosen_answer = a.answer;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> shared_error_stems(const arith::RulePack& pack, const std::vector<SyntheticStudent>& students,
                                            int count, std::uint64_t seed, int max_attempts) {
  if (students.empty()) throw std::invalid_argument("shared_error_stems needs at least one student");
  std::vector<arith::Family> families = error_families(pack, students.front());
  if (families.empty()) throw InsufficientTemplates("first student never errs");
  Rng rng(seed);
  std::vector<std::string> out;
  std::set<std::string> used;
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
    std::string stem = arith::render_stem(arith::random_problem(families[rng.index(families.size())], rng));
    if (used.count(stem)) continue;
    AnswerText correct = correct_answer(pack, stem);
    bool all_wrong = std::all_of(students.begin(), students.end(), [&](const SyntheticStudent& s) {
      return answers_wrong(answer_question(pack, s, stem), correct);
    });
    if (!all_wrong) continue;
    used.insert(stem);
    out.push_back(stem);
  }
  if (static_cast<int>(out.size()) < count) {
    throw InsufficientTemplates("found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                " shared error stems");
  }
  return out;
}

std::vector<GroupQuestion> make_group_questions(const arith::RulePack& pack,
                                                const std::vector<SyntheticStudent>& students, int count,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GroupQuestion> out;
  std::set<std::string> used;
  constexpr int kAttemptsPerQuestion = 100;
  for (int attempt = 0; attempt < count * kAttemptsPerQuestion && static_cast<int>(out.size()) < count; ++attempt) {
    arith::Family f = arith::kAllFamilies[rng.index(std::size(arith::kAllFamilies))];
    std::string stem = arith::render_stem(arith::random_problem(f, rng));
    if (used.count(stem)) continue;
    AnswerText correct = correct_answer(pack, stem);
    std::vector<AnswerText> wrong;
    for (const auto& s : students) {
      StudentAnswer a = answer_question(pack, s, stem);
      if (answers_wrong(a, correct)) wrong.push_back(a.answer);
    }
    if (wrong.empty()) continue;
    used.insert(stem);
    GroupQuestion q;
    q.question_id = "q" + padded(static_cast<int>(out.size()) + 1, 3);
    q.stem = stem;
    q.correct_answer = correct;
    q.actual_distractors = evaluation::top_k_answers(wrong, 3);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace pdgen
