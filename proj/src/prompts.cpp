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

#include "pdgen/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "embedded_data.hpp"

namespace pdgen {

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tpl.size());
  size_t pos = 0;
  while (pos < tpl.size()) {
    size_t open = tpl.find('{', pos);
    if (open == std::string_view::npos) break;
    size_t close = tpl.find('}', open + 1);
    if (close == std::string_view::npos) break;
    auto it = vars.find(std::string(tpl.substr(open + 1, close - open - 1)));
    if (it == vars.end()) {
      out.append(tpl.substr(pos, open + 1 - pos));
      pos = open + 1;
      continue;
    }
    out.append(tpl.substr(pos, open - pos));
    out += it->second;
    pos = close + 1;
  }
  out.append(tpl.substr(std::min(pos, tpl.size())));
  return out;
}

PromptSet PromptSet::builtin() {
  PromptSet set;
  for (const auto& [op, text] : embedded::prompt_templates()) set.templates_[op] = std::string(text);
  return set;
}

PromptSet PromptSet::from_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("prompt directory not found: " + dir);
  PromptSet set = builtin();
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    set.templates_[entry.path().stem().string()] = buf.str();
  }
  return set;
}

const std::string& PromptSet::get(const std::string& op) const {
  auto it = templates_.find(op);
  if (it == templates_.end()) throw std::out_of_range("no prompt template for '" + op + "'");
  return it->second;
}

}  // namespace pdgen
