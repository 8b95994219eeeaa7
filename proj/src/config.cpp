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

#include "pdgen/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "embedded_data.hpp"
#include "pdgen/prompts.hpp"

namespace pdgen {
namespace {

// Keys that may be null; a null value removes the setting.
bool nullable(const std::string& path) { return path == "simulate.premature_stop_fraction"; }

bool compatible(const Json& schema, const Json& value) {
  if (schema.is_boolean()) return value.is_boolean();
  if (schema.is_number_integer()) return value.is_number_integer();
  if (schema.is_number()) return value.is_number();
  if (schema.is_string()) return value.is_string();
  return true;
}

std::string type_name(const Json& schema) {
  if (schema.is_boolean()) return "a boolean";
  if (schema.is_number_integer()) return "an integer";
  if (schema.is_number()) return "a number";
  if (schema.is_string()) return "a string";
  return "an object";
}

void check_shape(const Json& doc, const Json& schema, const std::string& prefix) {
  if (!doc.is_object()) throw ConfigError((prefix.empty() ? "config" : prefix) + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!schema.contains(key)) throw ConfigError("unknown config key " + path);
    const Json& s = schema.at(key);
    if (path == "presets") {
      if (!value.is_object()) throw ConfigError("presets must be an object");
      Json preset_schema = schema;
      preset_schema.erase("presets");
      for (const auto& [name, body] : value.items()) check_shape(body, preset_schema, "presets." + name);
      continue;
    }
    if (s.is_object()) {
      check_shape(value, s, path);
    } else if (value.is_null()) {
      if (!nullable(path)) throw ConfigError(path + " must not be null");
    } else if (!compatible(s, value)) {
      throw ConfigError(path + " must be " + type_name(s));
    }
  }
}

template <typename T>
T get_as(const Json& doc, const char* section, const char* key) {
  try {
    return doc.at(section).at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string("missing or invalid ") + section + "." + key);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
bool parse_exact(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

Json parse_value_like(const Json& current, const std::string& key, const std::string& text) {
  if (current.is_boolean()) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(key + " expects true or false, got '" + text + "'");
  }
  if (current.is_number_unsigned()) {
    std::uint64_t v = 0;
    if (parse_exact(text, v)) return v;
    std::int64_t s = 0;
    if (parse_exact(text, s)) return s;
    throw ConfigError(key + " expects an integer, got '" + text + "'");
  }
  if (current.is_number_integer()) {
    std::int64_t v = 0;
    if (!parse_exact(text, v)) throw ConfigError(key + " expects an integer, got '" + text + "'");
    return v;
  }
  if (current.is_number()) {
    double v = 0;
    if (!parse_exact(text, v)) throw ConfigError(key + " expects a number, got '" + text + "'");
    return v;
  }
  if (current.is_string()) return text;
  Json parsed = Json::parse(text, nullptr, false);
  if (parsed.is_discarded()) return text;
  return parsed;
}

Config decode(const Json& doc) {
  Config c;
  c.snapshot = doc;
  c.search.max_depth = get_as<int>(doc, "search", "max_depth");
  c.search.branching = get_as<int>(doc, "search", "branching");
  c.search.exploration_constant = get_as<double>(doc, "search", "exploration_constant");
  c.search.iterations = get_as<int>(doc, "search", "iterations");
  c.search.plausibility_weight = get_as<double>(doc, "search", "plausibility_weight");
  c.search.rollout_cap = get_as<int>(doc, "search", "rollout_cap");
  c.search.seed = get_as<std::uint64_t>(doc, "search", "seed");
  if (std::string err = c.search.check(); !err.empty()) throw ConfigError("search: " + err);

  c.backend.kind = get_as<std::string>(doc, "backend", "kind");
  c.backend.endpoint = get_as<std::string>(doc, "backend", "endpoint");
  c.backend.model_name = get_as<std::string>(doc, "backend", "model_name");
  c.backend.cache_dir = get_as<std::string>(doc, "backend", "cache_dir");
  c.backend.request_timeout_s = get_as<int>(doc, "backend", "request_timeout_s");
  c.backend.max_retries = get_as<int>(doc, "backend", "max_retries");
  c.backend.retry_backoff_ms = get_as<int>(doc, "backend", "retry_backoff_ms");
  c.backend.rulepack_path = get_as<std::string>(doc, "backend", "rulepack");
  c.prompt_dir = get_as<std::string>(doc, "backend", "prompt_dir");
  if (std::string err = c.backend.check(); !err.empty()) throw ConfigError("backend: " + err);

  c.paths.dataset = get_as<std::string>(doc, "paths", "dataset");
  c.paths.prototypes = get_as<std::string>(doc, "paths", "prototypes");
  c.paths.generations = get_as<std::string>(doc, "paths", "generations");
  c.paths.evaluation = get_as<std::string>(doc, "paths", "evaluation");
  c.paths.group_questions = get_as<std::string>(doc, "paths", "group_questions");
  c.paths.group_output = get_as<std::string>(doc, "paths", "group_output");
  c.paths.manifests = get_as<std::string>(doc, "paths", "manifests");
  c.paths.traces = get_as<std::string>(doc, "paths", "traces");

  c.flags.no_concept = get_as<bool>(doc, "flags", "no_concept");
  c.flags.no_terminal = get_as<bool>(doc, "flags", "no_terminal");
  c.flags.no_eval = get_as<bool>(doc, "flags", "no_eval");
  c.flags.no_summary = get_as<bool>(doc, "flags", "no_summary");

  c.simulate.n_students = get_as<int>(doc, "simulate", "n_students");
  c.simulate.n_past = get_as<int>(doc, "simulate", "n_past");
  c.simulate.n_test = get_as<int>(doc, "simulate", "n_test");
  c.simulate.rules_per_student = get_as<int>(doc, "simulate", "rules_per_student");
  c.simulate.group_questions = get_as<int>(doc, "simulate", "group_questions");
  const Json& sim = doc.at("simulate");
  if (sim.contains("premature_stop_fraction") && !sim.at("premature_stop_fraction").is_null()) {
    double f = sim.at("premature_stop_fraction").get<double>();
    if (f < 0.0 || f > 1.0) throw ConfigError("simulate.premature_stop_fraction must be in [0, 1]");
    c.simulate.premature_stop_fraction = f;
  }

  c.preset = get_as<std::string>(doc, "run", "preset");
  c.workers = get_as<int>(doc, "run", "workers");
  if (c.workers < 0) throw ConfigError("run.workers must be non-negative");
  return c;
}

void set_path(Json& doc, const std::string& key, const Json& value) {
  Json* node = &doc;
  std::string rest = key;
  for (size_t dot; (dot = rest.find('.')) != std::string::npos;) {
    node = &(*node)[rest.substr(0, dot)];
    rest = rest.substr(dot + 1);
  }
  (*node)[rest] = value;
}

}  // namespace

Json default_config_json() { return Json::parse(embedded::default_config_json()); }

Override parse_override(const std::string& text) {
  size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + text);
  return {text.substr(0, eq), text.substr(eq + 1)};
}

void set_dotted(Json& doc, const std::string& key, const std::string& value) {
  const Json defaults = default_config_json();
  const Json* schema = &defaults;
  const Json* current = &doc;
  std::string rest = key;
  std::string prefix;
  while (true) {
    size_t dot = rest.find('.');
    std::string part = rest.substr(0, dot);
    if (part.empty()) throw ConfigError("malformed config key " + key);
    if (!schema->is_object() || !schema->contains(part)) throw ConfigError("unknown config key " + key);
    schema = &schema->at(part);
    current = (current && current->is_object() && current->contains(part)) ? &current->at(part) : nullptr;
    if (dot == std::string::npos) break;
    rest = rest.substr(dot + 1);
  }
  if (schema->is_object()) throw ConfigError(key + " is a section, not a value");
  const Json& like = (current && !current->is_null()) ? *current : *schema;
  if (nullable(key) && (value == "null" || value.empty())) {
    set_path(doc, key, nullptr);
    return;
  }
  set_path(doc, key, parse_value_like(like, key, value));
}

Config resolve_config(const Json& file_doc, const std::vector<Override>& overrides) {
  const Json defaults = default_config_json();
  Json file = file_doc.is_null() ? Json::object() : file_doc;
  check_shape(file, defaults, "");

  Json cli = Json::object();
  for (const auto& [key, value] : overrides) {
    Json probe = defaults;
    probe.merge_patch(file);
    set_dotted(probe, key, value);
    Json v = probe;
    std::string rest = key;
    for (size_t dot; (dot = rest.find('.')) != std::string::npos;) {
      v = v.at(rest.substr(0, dot));
      rest = rest.substr(dot + 1);
    }
    set_path(cli, key, v.at(rest));
  }

  Json merged = defaults;
  merged.merge_patch(file);
  merged.merge_patch(cli);
  const std::string preset = merged.at("run").value("preset", "");
  Json doc = defaults;
  if (!preset.empty()) {
    const Json& presets = merged.at("presets");
    if (!presets.contains(preset)) throw ConfigError("unknown preset " + preset);
    doc.merge_patch(presets.at(preset));
  }
  doc.merge_patch(file);
  doc.merge_patch(cli);
  return decode(doc);
}

Config load_config(const std::string& path, const std::vector<Override>& overrides) {
  Json file = Json::object();
  if (!path.empty()) {
    try {
      file = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
      throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
  }
  return resolve_config(file, overrides);
}

std::string output_key_for(const std::string& command) {
  static const std::map<std::string, std::string> keys = {
      {"simulate", "paths.dataset"},       {"build", "paths.prototypes"}, {"generate", "paths.generations"},
      {"evaluate", "paths.evaluation"},    {"group", "paths.group_output"},
  };
  auto it = keys.find(command);
  if (it == keys.end()) throw ConfigError("unknown command " + command);
  return it->second;
}

}  // namespace pdgen
