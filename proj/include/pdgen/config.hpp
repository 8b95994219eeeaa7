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

// Run configuration: one JSON document with a section per module.
//
// Layers, lowest first: shipped defaults, the selected preset, the config
// file, then dotted-key overrides ("search.iterations=20"). Explicit values
// therefore win over a preset. Unknown keys and type mismatches are errors.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/domain.hpp"
#include "pdgen/prototype.hpp"
#include "pdgen/serialization.hpp"

namespace pdgen {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathsConfig {
  std::string dataset;
  std::string prototypes;
  std::string generations;
  std::string evaluation;
  std::string group_questions;
  std::string group_output;
  std::string manifests;
  std::string traces;  // empty = no tree dumps
};

struct SimulateConfig {
  int n_students = 20;
  int n_past = 57;
  int n_test = 10;
  int rules_per_student = 1;
  std::optional<double> premature_stop_fraction;
  int group_questions = 20;
};

struct Config {
  SearchParams search;
  BackendConfig backend;
  std::string prompt_dir;
  PathsConfig paths;
  BuildFlags flags;
  SimulateConfig simulate;
  std::string preset;
  int workers = 0;
  Json snapshot;  // fully merged document the fields were read from
};

using Override = std::pair<std::string, std::string>;  // dotted key, value text

// The shipped default document.
Json default_config_json();

// Parses "key=value".
Override parse_override(const std::string& text);

// Sets a dotted key; the value text is read according to the type already
// at that key (or as JSON when the key holds null).
void set_dotted(Json& doc, const std::string& key, const std::string& value);

// Layers `file_doc` and `overrides` over the defaults and decodes the result.
Config resolve_config(const Json& file_doc, const std::vector<Override>& overrides = {});

// Reads the file (empty path = defaults only) and resolves it.
Config load_config(const std::string& path, const std::vector<Override>& overrides = {});

// Config key that holds the main output of each command.
std::string output_key_for(const std::string& command);

}  // namespace pdgen
