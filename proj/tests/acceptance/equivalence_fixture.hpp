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

// Hand-worked answer pairs, shared by the unit tests and the acceptance run.

#pragma once

#include <string>
#include <vector>

namespace pdgen::acceptance {

struct EquivalencePair {
  std::string a;
  std::string b;
  bool equivalent;
};

inline const std::vector<EquivalencePair>& equivalence_fixture() {
  static const std::vector<EquivalencePair> pairs = {
      // fractions and decimals
      {"1/2", "0.5", true},
      {"2/4", "1/2", true},
      {"0.50", "1/2", true},
      {".5", "0.5", true},
      {"3/4", "0.75", true},
      {"-1/4", "-0.25", true},
      {"1/3", "0.333", false},
      {"1/3", "0.3333333333333333", true},
      {"2/3", "4/6", true},
      {"5/1", "5", true},
      {"10/4", "2.5", true},
      {"1/2", "2/1", false},
      {"\\frac{1}{2}", "0.5", true},
      {"\\dfrac{3}{4}", "3/4", true},
      {"50%", "0.5", true},
      {"25%", "1/4", true},
      {"100%", "1", true},
      {"7", "7.0", true},
      {"0.1", "0.10000001", false},
      {"1000000000", "1000000000.0000001", true},
      // signs
      {"-3", "3", false},
      {"+3", "3", true},
      {"−3", "-3", true},
      {"-0", "0", true},
      {"-2/3", "2/-3", false},
      {"-1.5", "-3/2", true},
      // relations
      {"x < 3", "x<3", true},
      {"x < 3", "3 > x", true},
      {"x <= -2", "x ≤ -2", true},
      {"x ≥ 1/2", "x >= 0.5", true},
      {"x > 3", "x < 3", false},
      {"x > 3", "x >= 3", false},
      {"x = 4", "4 = x", true},
      {"x == 4", "x = 4", true},
      {"x \\leq 5", "x <= 5", true},
      {"y < 2", "x < 2", false},
      {"x > -3", "-3 < x", true},
      {"x < -3", "-3 < x", false},
      {"x =< 1", "x <= 1", true},
      // whitespace, case, delimiters
      {"  12 ", "12", true},
      {"X < 3", "x < 3", true},
      {"$5$", "5", true},
      {"5.", "5", true},
      {"{1, 2, 3}", "{1,2,3}", true},
      {"{1,2,3}", "{1,2}", false},
      {"True", "true", true},
      {"abc", "abd", false},
      {"", "0", false},
  };
  return pairs;
}

}  // namespace pdgen::acceptance
