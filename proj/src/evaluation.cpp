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

#include "pdgen/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

namespace pdgen::evaluation {
namespace {

constexpr long double kDecimalRelTol = 1e-9L;

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// \frac{a}{b} and \dfrac{a}{b} -> a/b
void rewrite_latex_fractions(std::string& s) {
  for (std::string_view cmd : {"\\dfrac{", "\\frac{"}) {
    size_t pos;
    while ((pos = s.find(cmd)) != std::string::npos) {
      size_t num_begin = pos + cmd.size();
      size_t num_end = s.find('}', num_begin);
      if (num_end == std::string::npos || num_end + 1 >= s.size() || s[num_end + 1] != '{') return;
      size_t den_end = s.find('}', num_end + 2);
      if (den_end == std::string::npos) return;
      std::string num = s.substr(num_begin, num_end - num_begin);
      std::string den = s.substr(num_end + 2, den_end - num_end - 2);
      s.replace(pos, den_end + 1 - pos, num + "/" + den);
    }
  }
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

bool numbers_equal(const ParsedNumber& a, const ParsedNumber& b) {
  if (a.exact && b.exact && *a.exact == *b.exact) return true;
  if (!a.decimal && !b.decimal && a.exact && b.exact) return false;
  long double x = a.approx;
  long double y = b.approx;
  if (x == y) return true;
  long double scale = std::max(std::fabs(x), std::fabs(y));
  return std::fabs(x - y) <= kDecimalRelTol * scale;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

std::string flip_op(std::string_view op) {
  if (op == "<") return ">";
  if (op == ">") return "<";
  if (op == "<=") return ">=";
  if (op == ">=") return "<=";
  return std::string(op);
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::string s(text);
  replace_all(s, "−", "-");  // minus sign
  replace_all(s, "–", "-");  // en dash
  replace_all(s, "≤", "<=");
  replace_all(s, "≥", ">=");
  replace_all(s, "\\left", "");
  replace_all(s, "\\right", "");
  replace_all(s, "\\leq", "<=");
  replace_all(s, "\\geq", ">=");
  replace_all(s, "\\le", "<=");
  replace_all(s, "\\ge", ">=");
  rewrite_latex_fractions(s);

  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  // Surrounding math delimiters and a trailing period carry no meaning.
  while (!out.empty() && (out.front() == '$')) out.erase(out.begin());
  while (!out.empty() && (out.back() == '$' || out.back() == '.')) out.pop_back();
  while (!out.empty() && out.back() == ' ') out.pop_back();
  while (!out.empty() && out.front() == ' ') out.erase(out.begin());
  return out;
}

std::optional<ParsedNumber> parse_number(std::string_view normalized) {
  std::string body = strip_spaces(normalized);
  bool percent = false;
  if (!body.empty() && body.back() == '%') {
    percent = true;
    body.pop_back();
  }
  if (body.empty()) return std::nullopt;

  // Grammar check first so that overflow still yields an approximate value.
  size_t i = 0;
  if (body[i] == '+' || body[i] == '-') ++i;
  size_t digits_before = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i, ++digits_before;
  bool decimal = false;
  bool fraction = false;
  if (i < body.size() && body[i] == '.') {
    decimal = true;
    ++i;
    size_t frac_digits = 0;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i, ++frac_digits;
    if (digits_before + frac_digits == 0) return std::nullopt;
  } else if (digits_before == 0) {
    return std::nullopt;
  } else if (i < body.size() && body[i] == '/') {
    fraction = true;
    ++i;
    size_t den_digits = 0;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i, ++den_digits;
    if (den_digits == 0) return std::nullopt;
  }
  if (i != body.size()) return std::nullopt;

  ParsedNumber out;
  out.decimal = decimal;
  out.exact = Rational::parse(body);
  if (out.exact) {
    out.approx = static_cast<long double>(out.exact->num()) / static_cast<long double>(out.exact->den());
  } else if (fraction) {
    size_t slash = body.find('/');
    long double den = std::strtold(body.c_str() + slash + 1, nullptr);
    if (den == 0) return std::nullopt;
    out.approx = std::strtold(body.substr(0, slash).c_str(), nullptr) / den;
  } else {
    out.approx = std::strtold(body.c_str(), nullptr);
  }
  if (percent) {
    if (out.exact) {
      try {
        out.exact = *out.exact / Rational(100);
      } catch (const RationalOverflow&) {
        out.exact.reset();
      }
    }
    out.approx /= 100;
  }
  return out;
}

std::optional<ParsedRelation> parse_relation(std::string_view normalized) {
  std::string body = strip_spaces(normalized);
  // Longest operators first.
  static constexpr std::string_view kOps[] = {"<=", ">=", "==", "=<", "=>", "<", ">", "="};
  for (std::string_view op : kOps) {
    size_t pos = body.find(op);
    if (pos == std::string::npos) continue;
    std::string lhs = body.substr(0, pos);
    std::string rhs = body.substr(pos + op.size());
    if (rhs.find_first_of("<>=") != std::string::npos) return std::nullopt;  // chained
    std::string canonical(op);
    if (canonical == "==") canonical = "=";
    if (canonical == "=<") canonical = "<=";
    if (canonical == "=>") canonical = ">=";
    if (is_identifier(lhs)) {
      auto value = parse_number(rhs);
      if (!value) return std::nullopt;
      return ParsedRelation{lhs, canonical, *value};
    }
    if (is_identifier(rhs)) {
      auto value = parse_number(lhs);
      if (!value) return std::nullopt;
      return ParsedRelation{rhs, flip_op(canonical), *value};
    }
    return std::nullopt;
  }
  return std::nullopt;
}

bool answers_equivalent(std::string_view a, std::string_view b) {
  std::string na = normalize_answer(a);
  std::string nb = normalize_answer(b);
  auto num_a = parse_number(na);
  auto num_b = parse_number(nb);
  if (num_a && num_b) return numbers_equal(*num_a, *num_b);
  auto rel_a = parse_relation(na);
  auto rel_b = parse_relation(nb);
  if (rel_a && rel_b) {
    return rel_a->variable == rel_b->variable && rel_a->op == rel_b->op &&
           numbers_equal(rel_a->value, rel_b->value);
  }
  return strip_spaces(na) == strip_spaces(nb);
}

double accuracy(const std::vector<Prediction>& predictions, const std::vector<QARecord>& truth) {
  if (truth.empty()) throw EvaluationError(EvaluationError::Kind::kEmptyEvaluation, "empty truth set");
  std::unordered_map<std::string, const QARecord*> by_id;
  for (const auto& record : truth) by_id.emplace(record.record_id, &record);
  std::unordered_map<std::string, bool> matched;
  for (const auto& prediction : predictions) {
    auto it = by_id.find(prediction.record_id);
    if (it == by_id.end()) {
      throw EvaluationError(EvaluationError::Kind::kUnknownRecordId,
                            "prediction for unknown record '" + prediction.record_id + "'");
    }
    // First prediction per record wins.
    matched.try_emplace(prediction.record_id, answers_equivalent(prediction.answer, it->second->chosen_answer));
  }
  size_t hits = 0;
  for (const auto& [id, ok] : matched) hits += ok ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<AnswerText> top_k_answers(const std::vector<AnswerText>& answers, int k) {
  struct EquivalenceClass {
    AnswerText representative;
    size_t count;
    size_t first_seen;
  };
  std::vector<EquivalenceClass> classes;
  for (size_t i = 0; i < answers.size(); ++i) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const EquivalenceClass& c) {
      return answers_equivalent(c.representative, answers[i]);
    });
    if (it == classes.end()) {
      classes.push_back({answers[i], 1, i});
    } else {
      ++it->count;
    }
  }
  std::sort(classes.begin(), classes.end(), [](const EquivalenceClass& x, const EquivalenceClass& y) {
    if (x.count != y.count) return x.count > y.count;
    if (x.first_seen != y.first_seen) return x.first_seen < y.first_seen;
    return x.representative < y.representative;
  });
  std::vector<AnswerText> out;
  for (const auto& c : classes) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(c.representative);
  }
  return out;
}

std::map<std::string, std::vector<AnswerText>> aggregate_group(
    const std::map<std::string, std::vector<AnswerText>>& per_question, int k) {
  if (k <= 0) throw std::invalid_argument("aggregate_group: k must be positive");
  std::map<std::string, std::vector<AnswerText>> out;
  for (const auto& [question_id, answers] : per_question) out.emplace(question_id, top_k_answers(answers, k));
  return out;
}

double recall(const std::vector<AnswerText>& generated, const std::vector<AnswerText>& actual) {
  if (actual.empty()) throw EvaluationError(EvaluationError::Kind::kEmptyActual, "recall over empty actual set");
  size_t covered = 0;
  for (const auto& a : actual) {
    bool hit = std::any_of(generated.begin(), generated.end(),
                           [&](const AnswerText& g) { return answers_equivalent(a, g); });
    covered += hit ? 1 : 0;
  }
  return static_cast<double>(covered) / static_cast<double>(actual.size());
}

}  // namespace pdgen::evaluation
