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

// Deterministic backend over the arithmetic rule pack. Every call is a pure
// function of its arguments and CallContext::seed.

#pragma once

#include <memory>

#include "pdgen/backend.hpp"
#include "pdgen/rulepack.hpp"

namespace pdgen {

// Plausibility proxy for scripted trajectories.
struct ScriptedPlausibility {
  static constexpr double kSingleBuggyRule = 1.0;
  static constexpr double kTerminalStopCorrectPrefix = 0.8;
  static constexpr double kMultipleErrors = 0.6;
  static constexpr double kSingleSlip = 0.4;
  static constexpr double kNoErrorWrongAnswer = 0.3;
  static constexpr double kNoErrorCorrectAnswer = 1.0;
};

class ScriptedBackend : public ModelBackend {
 public:
  ScriptedBackend();  // built-in rule pack
  explicit ScriptedBackend(std::shared_ptr<const arith::RulePack> pack);

  const arith::RulePack& pack() const { return *pack_; }

  std::string_view kind() const override { return "scripted"; }

  std::vector<Concept> extract_concepts(const QARecord& record, const CallContext& ctx) const override;
  StepProposal propose_children(const std::string& stem, const std::vector<ReasoningStep>& prefix, int branching,
                                const CallContext& ctx) const override;
  ReasoningTrajectory rollout(const std::string& stem, const std::vector<ReasoningStep>& prefix, int cap,
                              const CallContext& ctx) const override;
  AnswerText conclude(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                      const CallContext& ctx) const override;
  double score_plausibility(const std::string& stem, const ReasoningTrajectory& trajectory,
                            const AnswerText& correct_answer, const AnswerText& chosen_answer,
                            const CallContext& ctx) const override;
  std::string summarize(const Concept& knowledge_concept, const std::vector<ReasoningTrajectory>& trajectories,
                        const CallContext& ctx) const override;
  DistractorPrediction predict_distractor(const std::string& stem, const AnswerText& correct_answer,
                                          const std::vector<std::string>& misconceptions,
                                          const CallContext& ctx) const override;

  // Rule ids that explain the errors in `trajectory`, read from the steps'
  // rule ids: buggy step rules, plus the stop rule when a stop ends an
  // otherwise correct prefix. Slips are reported as "slip". Empty when the
  // trajectory has no identifiable error.
  std::vector<std::string> attribute_errors(const ReasoningTrajectory& trajectory) const;

  static constexpr std::string_view kSlipMisconception =
      "makes small arithmetic slips when computing intermediate values";
  static constexpr std::string_view kUnexplainedMisconception =
      "reaches wrong answers without a consistent identifiable error pattern";

 private:
  arith::State parse_or_throw(const std::string& stem, BackendError::Kind kind) const;
  arith::State replay_or_throw(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                               BackendError::Kind kind) const;

  std::shared_ptr<const arith::RulePack> pack_;
};

}  // namespace pdgen
