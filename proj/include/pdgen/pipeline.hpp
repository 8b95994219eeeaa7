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

// The commands: simulate, build, generate, evaluate, group. They hand off
// through files only. Each writes a manifest to <manifests>/<command>.json.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/config.hpp"
#include "pdgen/rulepack.hpp"
#include "pdgen/serialization.hpp"

namespace pdgen {

// A command that could not run; the message is a one-line cause.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* version_string();

std::unique_ptr<ModelBackend> backend_for(const Config& config);
std::shared_ptr<const arith::RulePack> rulepack_for(const Config& config);

const std::vector<std::string>& command_names();

// Runs one command and returns its summary (also stored in the manifest).
// "run" chains all five commands in order.
Json run_command(const std::string& command, const Config& config);

Json cmd_simulate(const Config& config);
Json cmd_build(const Config& config);
Json cmd_generate(const Config& config);
Json cmd_evaluate(const Config& config);
Json cmd_group(const Config& config);

}  // namespace pdgen
