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

// The model oracle behind every stage of the pipeline.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdgen/domain.hpp"

namespace pdgen {

class BackendError : public std::runtime_error {
 public:
  enum class Kind {
    kRemoteUnavailable,
    kEmptyExtraction,
    kNoApplicableStep,
    kMalformedProposal,
    kRolloutDivergence,
    kMalformedReply,
    kDegenerateOutput,
  };

  BackendError(Kind kind, const std::string& message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(BackendError::Kind kind);

// Per-call context. The scripted backend draws all randomness from `seed`.
struct CallContext {
  std::uint64_t seed = 0;
};

struct StepProposal {
  ReasoningStep correct_step;
  std::vector<ReasoningStep> erroneous_steps;  // B - 1 entries
};

struct DistractorPrediction {
  AnswerText answer;
  ReasoningTrajectory trajectory;
};

// Implementations must be safe to call from several threads at once.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual std::string_view kind() const = 0;

  // Throws kEmptyExtraction when no usable concept comes back.
  virtual std::vector<Concept> extract_concepts(const QARecord& record, const CallContext& ctx) const = 0;

  // Throws kNoApplicableStep when the prefix already ends in a final answer.
  virtual StepProposal propose_children(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                        int branching, const CallContext& ctx) const = 0;

  // `prefix` extended to a final answer with at most `cap` further steps.
  // Throws kRolloutDivergence otherwise.
  virtual ReasoningTrajectory rollout(const std::string& stem, const std::vector<ReasoningStep>& prefix, int cap,
                                      const CallContext& ctx) const = 0;

  // The latest intermediate result taken as the final answer. Empty means
  // no answer could be formed.
  virtual AnswerText conclude(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                              const CallContext& ctx) const = 0;

  // In [0, 1].
  virtual double score_plausibility(const std::string& stem, const ReasoningTrajectory& trajectory,
                                    const AnswerText& correct_answer, const AnswerText& chosen_answer,
                                    const CallContext& ctx) const = 0;

  virtual std::string summarize(const Concept& knowledge_concept, const std::vector<ReasoningTrajectory>& trajectories,
                                const CallContext& ctx) const = 0;

  virtual DistractorPrediction predict_distractor(const std::string& stem, const AnswerText& correct_answer,
                                                  const std::vector<std::string>& misconceptions,
                                                  const CallContext& ctx) const = 0;
};

struct BackendConfig {
  std::string kind = "scripted";  // scripted | remote
  std::string endpoint;
  std::string model_name;
  // Operation name -> template text. Missing operations use the built-in
  // templates.
  std::map<std::string, std::string> prompt_templates;
  std::string cache_dir = ".pdgen_cache";
  int request_timeout_s = 60;
  int max_retries = 3;
  int retry_backoff_ms = 500;  // doubled after each failed attempt
  std::string rulepack_path;  // scripted only; empty = built-in pack

  // Empty when valid, otherwise the first violated constraint.
  std::string check() const;
};

// Environment variable holding the remote API token.
inline constexpr const char* kApiKeyEnv = "PDGEN_API_KEY";

std::unique_ptr<ModelBackend> make_backend(const BackendConfig& config);

// Human-readable rendering used in prompts and summaries:
// "1. subtract 3 from both sides -> -2x < 6".
std::string format_steps(const std::vector<ReasoningStep>& steps);
std::string format_trajectory(const ReasoningTrajectory& trajectory);

}  // namespace pdgen
