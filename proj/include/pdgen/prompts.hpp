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
#include <string>
#include <string_view>

namespace pdgen {

// Replaces each {name} whose name is a key of `vars`. Other braces, such as
// JSON examples in the template, are left alone.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars);

class PromptSet {
 public:
  // Templates shipped in data/prompts.
  static PromptSet builtin();
  // Built-in templates overridden by every <op>.txt found in `dir`.
  static PromptSet from_dir(const std::string& dir);

  void set(const std::string& op, std::string text) { templates_[op] = std::move(text); }
  bool has(const std::string& op) const { return templates_.count(op) != 0; }
  // Throws std::out_of_range for an unknown operation.
  const std::string& get(const std::string& op) const;
  std::string render(const std::string& op, const std::map<std::string, std::string>& vars) const {
    return render_template(get(op), vars);
  }

 private:
  std::map<std::string, std::string> templates_;
};

}  // namespace pdgen
