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

#include "pdgen/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdgen/evaluation.hpp"

namespace pdgen {
namespace {

bool same_texts(const ReasoningTrajectory& a, const ReasoningTrajectory& b) {
  if (a.final_answer != b.final_answer || a.steps.size() != b.steps.size()) return false;
  for (size_t i = 0; i < a.steps.size(); ++i) {
    if (a.steps[i].text != b.steps[i].text) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(NodeKind kind) { return kind == NodeKind::kTerminal ? "terminal" : "reasoning"; }

bool TreeNode::fully_expanded() const {
  if (!expanded) return false;
  return std::all_of(children.begin(), children.end(),
                     [](const TreeNode& c) { return c.is_terminal() || c.visit_count > 0; });
}

double uct_score(const TreeNode& child, int parent_visits, double c) {
  if (child.visit_count == 0) return std::numeric_limits<double>::infinity();
  const double v = child.visit_count;
  return child.total_reward / v + c * std::sqrt(std::log(static_cast<double>(parent_visits)) / v);
}

std::vector<TreeNode*> select_path(TreeNode& root, const SearchParams& params) {
  std::vector<TreeNode*> path{&root};
  TreeNode* node = &root;
  while (!node->is_terminal() && node->fully_expanded() && node->depth < params.max_depth &&
         !node->children.empty()) {
    size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < node->children.size(); ++i) {
      double s = uct_score(node->children[i], node->visit_count, params.exploration_constant);
      if (s > best_score) {
        best = i;
        best_score = s;
      }
    }
    node = &node->children[best];
    path.push_back(node);
  }
  return path;
}

std::optional<size_t> select_best(const std::vector<LoggedTrajectory>& log) {
  std::optional<size_t> best;
  for (size_t i = 0; i < log.size(); ++i) {
    if (log[i].reward.match_score != 1.0) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = log[*best];
    const auto& e = log[i];
    if (e.reward.plausibility > b.reward.plausibility ||
        (e.reward.plausibility == b.reward.plausibility && e.trajectory.steps.size() < b.trajectory.steps.size())) {
      best = i;
    }
  }
  return best;
}

Reward score_trajectory(const ReasoningTrajectory& trajectory, bool no_answer, const QARecord& record,
                        const SearchParams& params, const ModelBackend& backend, const CallContext& ctx,
                        bool skip_plausibility) {
  if (no_answer || trajectory.final_answer.empty()) return Reward::zero();
  bool matched = evaluation::answers_equivalent(trajectory.final_answer, record.chosen_answer);
  double r2 = 0.0;
  if (!skip_plausibility) {
    r2 = std::clamp(
        backend.score_plausibility(record.stem, trajectory, record.correct_answer, record.chosen_answer, ctx), 0.0,
        1.0);
  }
  return Reward::make(matched, r2, params.plausibility_weight);
}

SearchTree::SearchTree(const QARecord& record, const SearchParams& params, const ModelBackend& backend,
                       SearchOptions options)
    : record_(record),
      params_(params),
      backend_(backend),
      options_(options),
      rng_(derive_seed(params.seed, record.record_id)) {
  if (std::string err = params_.check(); !err.empty()) throw std::invalid_argument(err);
  if (options_.no_eval) params_.plausibility_weight = 0.0;
  stats_.nodes_created = 1;
}

CallContext SearchTree::next_call() { return CallContext{rng_.next()}; }

std::vector<ReasoningStep> SearchTree::prefix_of(const std::vector<TreeNode*>& path) {
  std::vector<ReasoningStep> steps;
  for (const TreeNode* n : path) {
    if (n->step) steps.push_back(*n->step);
  }
  return steps;
}

TreeNode* SearchTree::expand(TreeNode& node, const std::vector<ReasoningStep>& prefix) {
  if (!node.expanded) {
    std::vector<TreeNode> kids;
    auto make = [&](NodeKind kind, std::optional<ReasoningStep> step) {
      TreeNode child;
      child.kind = kind;
      child.step = std::move(step);
      child.depth = node.depth + 1;
      kids.push_back(std::move(child));
    };
    try {
      StepProposal p = backend_.propose_children(record_.stem, prefix, params_.branching, next_call());
      make(NodeKind::kReasoning, p.correct_step);
      for (auto& s : p.erroneous_steps) make(NodeKind::kReasoning, std::move(s));
    } catch (const BackendError& e) {
      if (e.kind() != BackendError::Kind::kNoApplicableStep) throw;
    }
    if (!options_.no_terminal) make(NodeKind::kTerminal, std::nullopt);
    node.children = std::move(kids);
    node.expanded = true;
    stats_.nodes_created += static_cast<int>(node.children.size());
  }
  std::vector<size_t> unvisited;
  std::optional<size_t> terminal;
  for (size_t i = 0; i < node.children.size(); ++i) {
    const TreeNode& c = node.children[i];
    if (c.visit_count > 0) continue;
    if (c.is_terminal()) {
      terminal = i;
    } else {
      unvisited.push_back(i);
    }
  }
  if (!unvisited.empty()) return &node.children[unvisited[rng_.index(unvisited.size())]];
  if (terminal) return &node.children[*terminal];
  return nullptr;
}

void SearchTree::log_trajectory(const ReasoningTrajectory& t, const Reward& r) {
  for (auto& e : log_) {
    if (same_texts(e.trajectory, t)) {
      if (r.total > e.reward.total) {
        e.trajectory = t;
        e.reward = r;
      }
      return;
    }
  }
  log_.push_back({t, r});
}

void SearchTree::backpropagate(const std::vector<TreeNode*>& path, const Reward& reward) {
  for (TreeNode* n : path) {
    n->visit_count += 1;
    n->total_reward += reward.total;
  }
}

void SearchTree::iterate() {
  try {
    std::vector<TreeNode*> path = select_path(root_, params_);
    TreeNode* chosen = path.back();
    std::vector<ReasoningStep> prefix = prefix_of(path);
    if (!chosen->is_terminal() && chosen->depth < params_.max_depth && !chosen->fully_expanded()) {
      if (TreeNode* child = expand(*chosen, prefix)) {
        chosen = child;
        path.push_back(child);
        if (child->step) prefix.push_back(*child->step);
      }
    }

    auto score_and_log = [&](const ReasoningTrajectory& t, bool no_answer) {
      Reward r = score_trajectory(t, no_answer, record_, params_, backend_, next_call(), options_.no_eval);
      if (!no_answer && !t.final_answer.empty()) log_trajectory(t, r);
      return r;
    };
    auto concluded = [&]() {
      ReasoningTrajectory t;
      t.steps = prefix;
      t.final_answer = backend_.conclude(record_.stem, prefix, next_call());
      t.source = TrajectorySource::kTerminalStop;
      return t;
    };

    if (chosen->is_terminal()) {
      ReasoningTrajectory t = concluded();
      backpropagate(path, score_and_log(t, t.final_answer.empty()));
    } else {
      ReasoningTrajectory full;
      bool diverged = false;
      try {
        full = backend_.rollout(record_.stem, prefix, params_.rollout_cap, next_call());
      } catch (const BackendError& e) {
        if (e.kind() != BackendError::Kind::kRolloutDivergence) throw;
        diverged = true;
        full.steps = prefix;
      }
      backpropagate(path, score_and_log(full, diverged));
      if (!options_.no_terminal) {
        ReasoningTrajectory partial = concluded();
        backpropagate(path, score_and_log(partial, partial.final_answer.empty()));
      }
    }
    ++stats_.iterations_run;
    stats_.root_visits = root_.visit_count;
  } catch (const RecoveryError&) {
    throw;
  } catch (const std::exception& e) {
    stats_.root_visits = root_.visit_count;
    throw RecoveryError("record " + record_.record_id + ": " + e.what(), stats_);
  }
}

RecoveryResult SearchTree::result() const {
  RecoveryResult out;
  out.record_id = record_.record_id;
  out.trajectory_log = log_;
  out.stats = stats_;
  if (auto best = select_best(log_)) {
    out.matched = true;
    out.best_trajectory = log_[*best].trajectory;
    out.best_plausibility = log_[*best].reward.plausibility;
  }
  return out;
}

Json tree_to_json(const TreeNode& node) {
  Json j;
  j["kind"] = std::string(to_string(node.kind));
  j["depth"] = node.depth;
  j["visit_count"] = node.visit_count;
  j["total_reward"] = node.total_reward;
  if (node.step) {
    j["step"] = node.step->text;
    j["intermediate_result"] = node.step->intermediate_result;
  }
  Json kids = Json::array();
  for (const auto& c : node.children) kids.push_back(tree_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

Json SearchTree::trace() const {
  Json j;
  j["record_id"] = record_.record_id;
  j["iterations_run"] = stats_.iterations_run;
  j["nodes_created"] = stats_.nodes_created;
  j["root_visits"] = root_.visit_count;
  j["tree"] = tree_to_json(root_);
  return j;
}

RecoveryResult recover(const QARecord& record, const SearchParams& params, const ModelBackend& backend,
                       SearchOptions options) {
  SearchTree tree(record, params, backend, options);
  for (int i = 0; i < params.iterations; ++i) tree.iterate();
  return tree.result();
}

}  // namespace pdgen
