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

#include "pdgen/backend.hpp"

#include "pdgen/remote_backend.hpp"
#include "pdgen/rulepack.hpp"
#include "pdgen/scripted_backend.hpp"

namespace pdgen {

BackendError::BackendError(Kind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::string_view to_string(BackendError::Kind kind) {
  switch (kind) {
    case BackendError::Kind::kRemoteUnavailable: return "RemoteUnavailable";
    case BackendError::Kind::kEmptyExtraction: return "EmptyExtraction";
    case BackendError::Kind::kNoApplicableStep: return "NoApplicableStep";
    case BackendError::Kind::kMalformedProposal: return "MalformedProposal";
    case BackendError::Kind::kRolloutDivergence: return "RolloutDivergence";
    case BackendError::Kind::kMalformedReply: return "MalformedReply";
    case BackendError::Kind::kDegenerateOutput: return "DegenerateOutput";
  }
  return "BackendError";
}

std::string BackendConfig::check() const {
  if (kind != "scripted" && kind != "remote") return "backend.kind must be 'scripted' or 'remote', got '" + kind + "'";
  if (kind == "remote") {
    if (endpoint.empty()) return "backend.endpoint is required for the remote backend";
    if (model_name.empty()) return "backend.model_name is required for the remote backend";
  }
  if (request_timeout_s <= 0) return "backend.request_timeout_s must be positive";
  if (max_retries < 0) return "backend.max_retries must be non-negative";
  return {};
}

std::unique_ptr<ModelBackend> make_backend(const BackendConfig& config) {
  if (std::string err = config.check(); !err.empty()) throw std::invalid_argument(err);
  if (config.kind == "remote") return std::make_unique<RemoteBackend>(config);
  if (config.rulepack_path.empty()) return std::make_unique<ScriptedBackend>();
  return std::make_unique<ScriptedBackend>(
      std::make_shared<const arith::RulePack>(arith::RulePack::load_file(config.rulepack_path)));
}

std::string format_steps(const std::vector<ReasoningStep>& steps) {
  if (steps.empty()) return "(no steps yet)";
  std::string out;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (i) out += "\n";
    out += std::to_string(i + 1) + ". " + steps[i].text + " -> " + steps[i].intermediate_result;
  }
  return out;
}

std::string format_trajectory(const ReasoningTrajectory& trajectory) {
  std::string out = format_steps(trajectory.steps);
  out += "\nFinal answer: " + trajectory.final_answer;
  if (trajectory.source == TrajectorySource::kTerminalStop) out += " (stopped early)";
  return out;
}

}  // namespace pdgen
