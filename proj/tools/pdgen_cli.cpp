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

// pdgen command-line driver. Talks to the library through the C API only.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdgen/pdgen.h"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::string> seed;
  std::optional<std::string> backend;
  std::optional<std::string> out;
  std::optional<std::string> preset;
  std::optional<std::string> workers;
  std::vector<std::string> sets;
  int verbosity = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out) {
  cmd->add_option("-c,--config", o.config, "Config file (JSON)");
  cmd->add_option("--seed", o.seed, "Global seed");
  cmd->add_option("--backend", o.backend, "Backend kind: scripted | remote");
  if (with_out) cmd->add_option("-o,--out", o.out, "Path of the command's main output");
  cmd->add_option("--preset", o.preset, "Named preset, e.g. reasoning-heavy");
  cmd->add_option("--workers", o.workers, "Worker threads, 0 = all cores");
  cmd->add_option("--set", o.sets, "Config override key=value (repeatable)");
  cmd->add_flag("-v,--verbose", o.verbosity, "More logging (repeatable)");
  cmd->add_flag("-q,--quiet", o.quiet, "Errors only");
}

int report(pdgen_status st) {
  std::fprintf(stderr, "pdgen: %s: %s\n", pdgen_status_name(st), pdgen_last_error());
  return static_cast<int>(st);
}

struct ConfigHandle {
  pdgen_config* ptr = nullptr;
  ~ConfigHandle() { pdgen_config_free(ptr); }
};

int run(const std::string& command, const CommonOptions& o) {
  pdgen_set_log_level(o.quiet ? 1 : std::min(5, 2 + o.verbosity));
  ConfigHandle cfg;
  if (pdgen_status st = pdgen_config_new(o.config.c_str(), &cfg.ptr); st != PDGEN_OK) return report(st);

  auto set = [&](const char* key, const std::optional<std::string>& v) -> pdgen_status {
    return v ? pdgen_config_set(cfg.ptr, key, v->c_str()) : PDGEN_OK;
  };
  for (const auto& kv : o.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "pdgen: --set expects key=value, got '%s'\n", kv.c_str());
      return PDGEN_ERR_INVALID_ARGUMENT;
    }
    std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (pdgen_status st = pdgen_config_set(cfg.ptr, key.c_str(), value.c_str()); st != PDGEN_OK) return report(st);
  }
  for (auto [key, value] : {std::pair{"search.seed", &o.seed}, std::pair{"backend.kind", &o.backend},
                            std::pair{"run.preset", &o.preset}, std::pair{"run.workers", &o.workers}}) {
    if (pdgen_status st = set(key, *value); st != PDGEN_OK) return report(st);
  }
  if (o.out) {
    if (pdgen_status st = pdgen_config_set_output(cfg.ptr, command.c_str(), o.out->c_str()); st != PDGEN_OK) {
      return report(st);
    }
  }

  char* text = nullptr;
  pdgen_status st = command == "config" ? pdgen_config_dump(cfg.ptr, &text) : pdgen_run(cfg.ptr, command.c_str(), &text);
  if (st != PDGEN_OK) return report(st);
  if (text) std::printf("%s\n", text);
  pdgen_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized distractor generation from recovered misconception prototypes"};
  app.set_version_flag("--version", std::string(pdgen_version()));
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    bool with_out;
  };
  const Entry entries[] = {
      {"simulate", "Write a synthetic student corpus", true},
      {"build", "Build misconception prototypes for every student", true},
      {"generate", "Generate personalized distractors for the test records", true},
      {"evaluate", "Score generated distractors against the students' answers", true},
      {"group", "Aggregate distractors over shared questions and report recall", true},
      {"run", "simulate, build, generate, group and evaluate in order", false},
      {"config", "Print the resolved configuration", false},
  };
  CommonOptions options;
  std::string chosen;
  for (const auto& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, options, e.with_out);
    cmd->callback([&chosen, name = e.name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);
  return run(chosen, options);
}
