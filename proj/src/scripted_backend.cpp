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

#include "pdgen/scripted_backend.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pdgen/evaluation.hpp"
#include "pdgen/rng.hpp"

namespace pdgen {
namespace {

using arith::Application;
using arith::RuleKind;
using arith::State;

constexpr std::string_view kSlipId = "slip";
// Slips tried per side when replaying foreign steps.
constexpr int kMaxSlip = 8;

bool same_step(const ReasoningStep& a, const ReasoningStep& b) {
  return a.text == b.text && a.intermediate_result == b.intermediate_result;
}

enum class StepClass { kCorrect, kBuggy, kSlip, kUnknownError };

struct Classified {
  int buggy = 0;
  int slips = 0;
  int unknown = 0;
  int errors() const { return buggy + slips + unknown; }
};

}  // namespace

ScriptedBackend::ScriptedBackend()
    : pack_(std::shared_ptr<const arith::RulePack>(&arith::RulePack::builtin(), [](const arith::RulePack*) {})) {}

ScriptedBackend::ScriptedBackend(std::shared_ptr<const arith::RulePack> pack) : pack_(std::move(pack)) {
  if (!pack_) throw std::invalid_argument("ScriptedBackend needs a rule pack");
}

State ScriptedBackend::parse_or_throw(const std::string& stem, BackendError::Kind kind) const {
  auto state = arith::parse_stem(stem);
  if (!state) throw BackendError(kind, "stem not in the scripted grammar: '" + stem + "'");
  return *state;
}

State ScriptedBackend::replay_or_throw(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                       BackendError::Kind kind) const {
  State start = parse_or_throw(stem, kind);
  auto state = pack_->replay(start, prefix);
  if (!state) throw BackendError(kind, "prefix cannot be replayed on '" + stem + "'");
  return *state;
}

std::vector<Concept> ScriptedBackend::extract_concepts(const QARecord& record, const CallContext&) const {
  State start = parse_or_throw(record.stem, BackendError::Kind::kEmptyExtraction);
  std::vector<Concept> out;
  for (const auto& label : pack_->concepts_for(start)) {
    if (auto c = Concept::try_make(label)) {
      if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
    }
  }
  if (out.empty()) throw BackendError(BackendError::Kind::kEmptyExtraction, "no concept for '" + record.stem + "'");
  return out;
}

StepProposal ScriptedBackend::propose_children(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                               int branching, const CallContext& ctx) const {
  if (branching < 2) throw std::invalid_argument("branching must be at least 2");
  State state = replay_or_throw(stem, prefix, BackendError::Kind::kMalformedProposal);
  if (arith::is_final(state)) throw BackendError(BackendError::Kind::kNoApplicableStep, "state is already final");
  auto correct = pack_->correct_step(state);
  if (!correct) throw BackendError(BackendError::Kind::kNoApplicableStep, "no correct rule applies");

  const size_t need = static_cast<size_t>(branching - 1);
  std::vector<ReasoningStep> seen{correct->step};
  auto fresh = [&](const ReasoningStep& s) {
    return std::none_of(seen.begin(), seen.end(), [&](const ReasoningStep& o) { return same_step(o, s); });
  };

  std::vector<Application> buggy;
  for (auto& app : pack_->buggy_steps(state)) {
    if (fresh(app.step)) {
      seen.push_back(app.step);
      buggy.push_back(std::move(app));
    }
  }

  StepProposal out;
  out.correct_step = correct->step;
  if (buggy.size() > need) {
    Rng rng(ctx.seed);
    for (size_t i : rng.sample(buggy.size(), need)) out.erroneous_steps.push_back(buggy[i].step);
  } else {
    for (const auto& app : buggy) out.erroneous_steps.push_back(app.step);
  }
  // Pad with slips +1, -1, +2, -2, ...
  for (int k = 1; out.erroneous_steps.size() < need; ++k) {
    if (k > 1000) throw BackendError(BackendError::Kind::kMalformedProposal, "cannot find enough distinct steps");
    for (int delta : {k, -k}) {
      if (out.erroneous_steps.size() >= need) break;
      auto slip = pack_->slip_step(state, delta);
      if (slip && fresh(slip->step)) {
        seen.push_back(slip->step);
        out.erroneous_steps.push_back(slip->step);
      }
    }
  }
  return out;
}

ReasoningTrajectory ScriptedBackend::rollout(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                             int cap, const CallContext&) const {
  if (cap < 1) throw std::invalid_argument("rollout cap must be positive");
  State state = replay_or_throw(stem, prefix, BackendError::Kind::kRolloutDivergence);
  ReasoningTrajectory out;
  out.steps = prefix;
  out.source = TrajectorySource::kSimulation;
  for (int added = 0; !arith::is_final(state); ++added) {
    if (added >= cap) {
      throw BackendError(BackendError::Kind::kRolloutDivergence, "no final answer within " + std::to_string(cap) +
                                                                     " steps");
    }
    auto app = pack_->correct_step(state);
    if (!app) throw BackendError(BackendError::Kind::kRolloutDivergence, "no rule applies to " + render_state(state));
    out.steps.push_back(app->step);
    state = std::move(app->next);
  }
  out.final_answer = arith::render_answer(state);
  return out;
}

AnswerText ScriptedBackend::conclude(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                     const CallContext&) const {
  if (prefix.empty()) return {};
  auto start = arith::parse_stem(stem);
  if (start) {
    if (auto state = pack_->replay(*start, prefix)) {
      AnswerText answer = arith::render_answer(*state);
      if (!answer.empty()) return answer;
    }
  }
  return prefix.back().intermediate_result;
}

double ScriptedBackend::score_plausibility(const std::string& stem, const ReasoningTrajectory& trajectory,
                                           const AnswerText& correct_answer, const AnswerText&,
                                           const CallContext&) const {
  // Classify each step from its rule id when present, otherwise by replay.
  std::optional<State> state = arith::parse_stem(stem);
  Classified c;
  for (const auto& step : trajectory.steps) {
    std::optional<Application> app;
    if (state) {
      if (step.rule_id) {
        app = pack_->apply_id(*step.rule_id, *state);
        if (app && !same_step(app->step, step)) app.reset();
      }
      if (!app) {
        std::vector<Application> candidates;
        if (auto ok = pack_->correct_step(*state)) candidates.push_back(std::move(*ok));
        for (auto& b : pack_->buggy_steps(*state)) candidates.push_back(std::move(b));
        for (int k = 1; k <= kMaxSlip; ++k) {
          for (int delta : {k, -k}) {
            if (auto s = pack_->slip_step(*state, delta)) candidates.push_back(std::move(*s));
          }
        }
        for (auto& cand : candidates) {
          if (same_step(cand.step, step)) {
            app = std::move(cand);
            break;
          }
        }
      }
    }
    if (app) {
      if (app->slip) {
        ++c.slips;
      } else if (app->erroneous) {
        ++c.buggy;
      }
      state = std::move(app->next);
    } else {
      // Foreign step: trust its flag, and stop replaying.
      state.reset();
      if (step.is_erroneous.value_or(true)) ++c.unknown;
    }
  }

  double score;
  if (c.errors() >= 2) {
    score = ScriptedPlausibility::kMultipleErrors;
  } else if (c.errors() == 1) {
    score = c.buggy == 1 ? ScriptedPlausibility::kSingleBuggyRule : ScriptedPlausibility::kSingleSlip;
  } else if (trajectory.source == TrajectorySource::kTerminalStop) {
    score = ScriptedPlausibility::kTerminalStopCorrectPrefix;
  } else if (evaluation::answers_equivalent(trajectory.final_answer, correct_answer)) {
    score = ScriptedPlausibility::kNoErrorCorrectAnswer;
  } else {
    score = ScriptedPlausibility::kNoErrorWrongAnswer;
  }
  return std::clamp(score, 0.0, 1.0);
}

std::vector<std::string> ScriptedBackend::attribute_errors(const ReasoningTrajectory& trajectory) const {
  std::vector<std::string> ids;
  auto add = [&](const std::string& id) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  };
  bool all_correct = true;
  for (const auto& step : trajectory.steps) {
    if (!step.rule_id) {
      if (step.is_erroneous.value_or(false)) all_correct = false;
      continue;
    }
    if (arith::parse_slip_rule_id(*step.rule_id)) {
      add(std::string(kSlipId));
      all_correct = false;
      continue;
    }
    const arith::Rule* rule = pack_->find(*step.rule_id);
    if (rule && rule->buggy) {
      add(rule->id);
      all_correct = false;
    }
  }
  // A stop after a correct prefix: the stop rule that can fire in the stage
  // the last step led to. Guards are not checked, as the state is unknown.
  if (trajectory.source == TrajectorySource::kTerminalStop && all_correct && !trajectory.steps.empty() &&
      trajectory.steps.back().rule_id) {
    const arith::Rule* last = pack_->find(*trajectory.steps.back().rule_id);
    if (last) {
      arith::Stage stage = last->to ? *last->to : last->from.front();
      for (const auto& r : pack_->buggy_rules()) {
        if (r.kind == RuleKind::kStop && std::find(r.from.begin(), r.from.end(), stage) != r.from.end()) {
          add(r.id);
          break;
        }
      }
    }
  }
  return ids;
}

std::string ScriptedBackend::summarize(const Concept&, const std::vector<ReasoningTrajectory>& trajectories,
                                       const CallContext&) const {
  std::map<std::string, int> votes;  // ordered: ties go to the smaller id
  int slips = 0;
  for (const auto& t : trajectories) {
    for (const auto& id : attribute_errors(t)) {
      if (id == kSlipId) {
        ++slips;
      } else {
        ++votes[id];
      }
    }
  }
  if (!votes.empty()) {
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return pack_->find(best->first)->misconception;
  }
  return std::string(slips > 0 ? kSlipMisconception : kUnexplainedMisconception);
}

DistractorPrediction ScriptedBackend::predict_distractor(const std::string& stem, const AnswerText& correct_answer,
                                                         const std::vector<std::string>& misconceptions,
                                                         const CallContext& ctx) const {
  State start = parse_or_throw(stem, BackendError::Kind::kDegenerateOutput);
  auto wrong = [&](const arith::Solution& sol) {
    return !sol.diverged && !sol.answer().empty() && !evaluation::answers_equivalent(sol.answer(), correct_answer);
  };
  auto attempt = [&](const arith::Rule& rule) -> std::optional<DistractorPrediction> {
    arith::Solution sol = arith::solve(*pack_, start, {&rule});
    if (sol.fired_buggy.empty() || !wrong(sol)) return std::nullopt;
    return DistractorPrediction{sol.answer(), sol.trajectory()};
  };

  for (const auto& m : misconceptions) {
    if (const arith::Rule* rule = pack_->find_by_misconception(m)) {
      if (auto p = attempt(*rule)) return *p;
    }
  }

  // Fallback: a seeded-random buggy rule that applies to this stem.
  std::vector<DistractorPrediction> applicable;
  for (const auto& rule : pack_->buggy_rules()) {
    if (auto p = attempt(rule)) applicable.push_back(std::move(*p));
  }
  if (!applicable.empty()) {
    Rng rng(ctx.seed);
    return applicable[rng.index(applicable.size())];
  }

  // Last resort: the correct solution with a slip in its last step.
  arith::Solution sol = arith::solve(*pack_, start, {});
  if (sol.steps.empty() || sol.diverged) {
    throw BackendError(BackendError::Kind::kDegenerateOutput, "no erroneous answer for '" + stem + "'");
  }
  State before = sol.steps.size() == 1 ? start : sol.steps[sol.steps.size() - 2].next;
  for (int delta : {1, -1, 2, -2}) {
    auto slip = pack_->slip_step(before, delta);
    if (!slip) continue;
    DistractorPrediction p;
    for (size_t i = 0; i + 1 < sol.steps.size(); ++i) p.trajectory.steps.push_back(sol.steps[i].step);
    p.trajectory.steps.push_back(slip->step);
    p.trajectory.final_answer = arith::render_answer(slip->next);
    p.answer = p.trajectory.final_answer;
    if (!p.answer.empty() && !evaluation::answers_equivalent(p.answer, correct_answer)) return p;
  }
  throw BackendError(BackendError::Kind::kDegenerateOutput, "no erroneous answer for '" + stem + "'");
}

}  // namespace pdgen
