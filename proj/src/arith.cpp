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

#include "pdgen/arith.hpp"

#include <cctype>
#include <regex>
#include <stdexcept>

namespace pdgen::arith {
namespace {

// Generator ranges.
constexpr std::int64_t kCoefMin = -9, kCoefMax = 9;
constexpr std::int64_t kConstMin = -9, kConstMax = 9;
constexpr std::int64_t kRhsMin = -12, kRhsMax = 12;
constexpr std::int64_t kSetMin = 2, kRelSetMax = 20, kSubsetMax = 40, kFuncSetMax = 12;
// Relation problems keep m*n at or below this so 2^(m*n) stays well inside
// int64 even after a slipped exponent.
constexpr std::int64_t kRelMaxPairs = 40;
// Share of linear stems generated without a constant term ("-2x < 6").
constexpr double kNoConstantShare = 0.35;

const char* const kRelations[] = {"<", ">", "<=", ">=", "="};

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string coefficient_text(const Rational& a) {
  if (a == Rational(1)) return "";
  if (a == Rational(-1)) return "-";
  if (a.is_integer()) return a.str();
  return "(" + a.str() + ")";
}

std::optional<Rational> parse_coefficient(std::string_view text) {
  if (text.empty() || text == "+") return Rational(1);
  if (text == "-") return Rational(-1);
  std::string t(text);
  if (!t.empty() && t.back() == '*') t.pop_back();
  bool negative = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    negative = t[0] == '-';
    t.erase(t.begin());
  }
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  auto value = Rational::parse(t);
  if (!value) return std::nullopt;
  return negative ? -*value : *value;
}

// Parses "a x + b" with terms in any order.
bool parse_linear_side(const std::string& side, Rational& a, Rational& b) {
  a = Rational(0);
  b = Rational(0);
  bool saw_x = false;
  size_t i = 0;
  while (i < side.size()) {
    size_t j = i + 1;
    int depth = side[i] == '(' ? 1 : 0;
    while (j < side.size()) {
      char ch = side[j];
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth == 0 && (ch == '+' || ch == '-') && side[j - 1] != '*' && side[j - 1] != '/') break;
      ++j;
    }
    std::string term = side.substr(i, j - i);
    i = j;
    size_t x = term.find('x');
    if (x != std::string::npos) {
      if (x != term.size() - 1) return false;
      auto coef = parse_coefficient(std::string_view(term).substr(0, x));
      if (!coef) return false;
      a = a + *coef;
      saw_x = true;
    } else {
      auto value = Rational::parse(term);
      if (!value) return false;
      b = b + *value;
    }
  }
  return saw_x && a != Rational(0);
}

std::optional<State> parse_linear(std::string body) {
  std::string compact;
  for (char ch : body) {
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  }
  static constexpr std::string_view kOps[] = {"<=", ">=", "<", ">", "="};
  for (std::string_view op : kOps) {
    size_t pos = compact.find(op);
    if (pos == std::string::npos) continue;
    std::string lhs = compact.substr(0, pos);
    std::string rhs = compact.substr(pos + op.size());
    Rational a, b;
    if (!parse_linear_side(lhs, a, b)) return std::nullopt;
    auto c = Rational::parse(rhs);
    if (!c) return std::nullopt;
    return make_linear(a, b, std::string(op), *c);
  }
  return std::nullopt;
}

}  // namespace

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kLinear: return "linear";
    case Stage::kRelations: return "relations";
    case Stage::kPower: return "power";
    case Stage::kFunctions: return "functions";
    case Stage::kDone: return "done";
  }
  return "?";
}

std::optional<Stage> stage_from_name(std::string_view name) {
  for (Stage s : {Stage::kLinear, Stage::kRelations, Stage::kPower, Stage::kFunctions, Stage::kDone}) {
    if (stage_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kLinear: return "linear";
    case Family::kRelations: return "relations";
    case Family::kSubsets: return "subsets";
    case Family::kFunctions: return "functions";
  }
  return "?";
}

const Rational& State::slot(const std::string& name) const {
  auto it = slots.find(name);
  if (it == slots.end()) {
    throw std::out_of_range("slot '" + name + "' not defined in stage " + std::string(stage_name(stage)));
  }
  return it->second;
}

bool is_final(const State& state) {
  switch (state.stage) {
    case Stage::kLinear: return state.slot("a") == Rational(1) && state.slot("b") == Rational(0);
    case Stage::kDone: return true;
    default: return false;
  }
}

std::string value_slot(Stage stage) {
  switch (stage) {
    case Stage::kLinear: return "c";
    case Stage::kPower: return "p";
    case Stage::kDone: return "v";
    default: return "";
  }
}

std::string render_linear(const State& state) {
  const Rational& a = state.slot("a");
  const Rational& b = state.slot("b");
  std::string out = coefficient_text(a) + "x";
  if (b > Rational(0)) out += " + " + b.str();
  if (b < Rational(0)) out += " - " + b.abs().str();
  out += " " + state.rel + " " + state.slot("c").str();
  return out;
}

std::string render_state(const State& state) {
  switch (state.stage) {
    case Stage::kLinear: return render_linear(state);
    case Stage::kPower:
    case Stage::kDone: {
      std::string value = state.slot(value_slot(state.stage)).str();
      return state.expr.empty() ? value : state.expr + "=" + value;
    }
    case Stage::kRelations:
    case Stage::kFunctions:
      return "|A|=" + state.slot("m").str() + ", |B|=" + state.slot("n").str();
  }
  return {};
}

std::string render_answer(const State& state) {
  switch (state.stage) {
    case Stage::kLinear: return render_linear(state);
    case Stage::kPower:
    case Stage::kDone: return state.slot(value_slot(state.stage)).str();
    default: return {};
  }
}

std::string render_stem(const State& initial) {
  switch (initial.stage) {
    case Stage::kLinear: return "Solve " + render_linear(initial);
    case Stage::kRelations:
      return "How many binary relations are there from a set A with " + initial.slot("m").str() +
             " elements to a set B with " + initial.slot("n").str() + " elements?";
    case Stage::kPower:
      return "How many subsets does a set with " + initial.slot("p").str() + " elements have?";
    case Stage::kFunctions:
      return "How many functions are there from a set A with " + initial.slot("m").str() +
             " elements to a set B with " + initial.slot("n").str() + " elements?";
    case Stage::kDone: break;
  }
  throw std::invalid_argument("no stem for a solved state");
}

std::optional<State> parse_stem(std::string_view stem) {
  std::string s(stem);
  replace_all(s, "−", "-");
  replace_all(s, "≤", "<=");
  replace_all(s, "≥", ">=");
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));

  size_t solve = s.find("solve");
  if (solve != std::string::npos) {
    std::string body = s.substr(solve + 5);
    if (!body.empty() && body.front() == ':') body.erase(body.begin());
    return parse_linear(body);
  }

  static const std::regex kRelationsRe(
      R"(how many (?:binary )?relations .*from a set a with (\d+) elements? to a set b with (\d+) elements?)");
  static const std::regex kFunctionsRe(
      R"(how many functions .*from a set a with (\d+) elements? to a set b with (\d+) elements?)");
  static const std::regex kSubsetsRe(R"(how many subsets does a set with (\d+) elements? have)");
  std::smatch m;
  if (std::regex_search(s, m, kRelationsRe)) return make_relations(std::stoll(m[1]), std::stoll(m[2]));
  if (std::regex_search(s, m, kFunctionsRe)) return make_functions(std::stoll(m[1]), std::stoll(m[2]));
  if (std::regex_search(s, m, kSubsetsRe)) return make_subsets(std::stoll(m[1]));
  return std::nullopt;
}

State make_linear(Rational a, Rational b, std::string rel, Rational c) {
  State s;
  s.stage = Stage::kLinear;
  s.slots = {{"a", a}, {"b", b}, {"c", c}};
  s.rel = std::move(rel);
  return s;
}

State make_relations(std::int64_t m, std::int64_t n) {
  State s;
  s.stage = Stage::kRelations;
  s.slots = {{"m", Rational(m)}, {"n", Rational(n)}};
  return s;
}

State make_subsets(std::int64_t n) {
  State s;
  s.stage = Stage::kPower;
  s.slots = {{"p", Rational(n)}};
  return s;
}

State make_functions(std::int64_t m, std::int64_t n) {
  State s;
  s.stage = Stage::kFunctions;
  s.slots = {{"m", Rational(m)}, {"n", Rational(n)}};
  return s;
}

State random_problem(Family family, Rng& rng) {
  switch (family) {
    case Family::kLinear: {
      while (true) {
        std::int64_t a = rng.range(kCoefMin, kCoefMax);
        if (a == 0) continue;
        std::int64_t b = 0;
        if (rng.unit() >= kNoConstantShare) {
          while (b == 0) b = rng.range(kConstMin, kConstMax);
        }
        std::int64_t c = rng.range(kRhsMin, kRhsMax);
        std::string rel = kRelations[rng.index(5)];
        State s = make_linear(Rational(a), Rational(b), rel, Rational(c));
        if (!is_final(s)) return s;
      }
    }
    case Family::kRelations:
      while (true) {
        std::int64_t m = rng.range(kSetMin, kRelSetMax), n = rng.range(kSetMin, kRelSetMax);
        if (m * n <= kRelMaxPairs) return make_relations(m, n);
      }
    case Family::kSubsets: return make_subsets(rng.range(kSetMin, kSubsetMax));
    case Family::kFunctions: return make_functions(rng.range(kSetMin, kFuncSetMax), rng.range(kSetMin, kFuncSetMax));
  }
  throw std::invalid_argument("unknown family");
}

void for_each_generator_state(const std::function<bool(const State&)>& visit) {
  for (std::int64_t m = kSetMin; m <= kRelSetMax; ++m) {
    for (std::int64_t n = kSetMin; n <= kRelSetMax && m * n <= kRelMaxPairs; ++n) {
      if (!visit(make_relations(m, n))) return;
    }
  }
  for (std::int64_t n = kSetMin; n <= kSubsetMax; ++n) {
    if (!visit(make_subsets(n))) return;
  }
  for (std::int64_t m = kSetMin; m <= kFuncSetMax; ++m) {
    for (std::int64_t n = kSetMin; n <= kFuncSetMax; ++n) {
      if (!visit(make_functions(m, n))) return;
    }
  }
  for (std::int64_t a = kCoefMin; a <= kCoefMax; ++a) {
    if (a == 0) continue;
    for (std::int64_t b = kConstMin; b <= kConstMax; ++b) {
      for (std::int64_t c = kRhsMin; c <= kRhsMax; ++c) {
        for (const char* rel : kRelations) {
          State s = make_linear(Rational(a), Rational(b), rel, Rational(c));
          if (is_final(s)) continue;
          if (!visit(s)) return;
        }
      }
    }
  }
}

}  // namespace pdgen::arith
