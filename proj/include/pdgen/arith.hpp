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

// The synthetic problem grammar used by the scripted backend and the
// synthetic students: one-variable linear equations/inequalities and three
// small counting templates (binary relations, subsets, functions).
//
// A problem is a State. Rules (see rulepack.hpp) rewrite one State into the
// next; this header only knows how states look, how they are written as
// stems and intermediate results, and which ones are solved.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdgen/rational.hpp"
#include "pdgen/rng.hpp"

namespace pdgen::arith {

enum class Stage {
  kLinear,     // a*x + b <rel> c                 slots a, b, c
  kRelations,  // |A| = m, |B| = n, count A->B relations   slots m, n
  kPower,      // exponent p known, 2^p pending   slot p
  kFunctions,  // |A| = m, |B| = n, count A->B functions   slots m, n
  kDone,       // value v computed                slot v
};

std::string_view stage_name(Stage stage);
std::optional<Stage> stage_from_name(std::string_view name);

struct State {
  Stage stage = Stage::kLinear;
  std::map<std::string, Rational> slots;
  std::string rel;   // kLinear only: < > <= >= =
  std::string expr;  // value stages: how the value was computed, e.g. "2×3"

  const Rational& slot(const std::string& name) const;

  friend bool operator==(const State&, const State&) = default;
};

enum class Family { kLinear, kRelations, kSubsets, kFunctions };

std::string_view family_name(Family family);
inline constexpr Family kAllFamilies[] = {Family::kLinear, Family::kRelations, Family::kSubsets,
                                          Family::kFunctions};

// Solved form: linear with a = 1 and b = 0, or kDone.
bool is_final(const State& state);

// Slot that carries the answer value in this stage ("c", "p", "v"), or
// empty for the counting start stages.
std::string value_slot(Stage stage);

std::string render_linear(const State& state);

// Intermediate result shown after a step: "-2x < 6", "2×3=6", "2^6=64".
std::string render_state(const State& state);

// Answer text a student would commit to in this state. Empty for the
// counting start stages, which have no value yet.
std::string render_answer(const State& state);

std::string render_stem(const State& initial);

// Lenient: accepts "solve x+1=3", "Solve -2x + 3 < 9", unicode minus and
// relation glyphs, plus the three counting sentences.
std::optional<State> parse_stem(std::string_view stem);

State make_linear(Rational a, Rational b, std::string rel, Rational c);
State make_relations(std::int64_t m, std::int64_t n);
State make_subsets(std::int64_t n);
State make_functions(std::int64_t m, std::int64_t n);

// Random initial state of the given family within the generator ranges.
State random_problem(Family family, Rng& rng);

// Every initial state the generator can produce. Used to check rule packs.
void for_each_generator_state(const std::function<bool(const State&)>& visit);

}  // namespace pdgen::arith
