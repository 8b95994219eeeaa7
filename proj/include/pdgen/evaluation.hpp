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

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdgen/domain.hpp"
#include "pdgen/rational.hpp"

namespace pdgen::evaluation {

class EvaluationError : public std::runtime_error {
 public:
  enum class Kind { kEmptyEvaluation, kUnknownRecordId, kEmptyActual };
  EvaluationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Lowercase, unify unicode minus and relation glyphs, collapse whitespace.
std::string normalize_answer(std::string_view text);

struct ParsedNumber {
  std::optional<Rational> exact;  // absent when it does not fit in int64
  long double approx = 0;
  bool decimal = false;  // written with a decimal point
};

// Integer, decimal, fraction p/q, or percent. Input must already be
// normalized.
std::optional<ParsedNumber> parse_number(std::string_view normalized);

struct ParsedRelation {
  std::string variable;
  std::string op;  // one of < > <= >= =
  ParsedNumber value;
};

// "x > -3", "-3 < x", "y<=1/2". The variable is moved to the left.
std::optional<ParsedRelation> parse_relation(std::string_view normalized);

bool answers_equivalent(std::string_view a, std::string_view b);

struct Prediction {
  std::string record_id;
  AnswerText answer;
};

// Fraction of truth records whose chosen answer is matched. Missing
// predictions count as misses; predictions for unknown records throw.
double accuracy(const std::vector<Prediction>& predictions, const std::vector<QARecord>& truth);

// Merge answers into equivalence classes (greedy, first-seen representative)
// and keep the k largest classes; ties go to the earlier first appearance,
// then the lexicographically smaller representative.
std::vector<AnswerText> top_k_answers(const std::vector<AnswerText>& answers, int k);

std::map<std::string, std::vector<AnswerText>> aggregate_group(
    const std::map<std::string, std::vector<AnswerText>>& per_question, int k = 3);

double recall(const std::vector<AnswerText>& generated, const std::vector<AnswerText>& actual);

}  // namespace pdgen::evaluation
