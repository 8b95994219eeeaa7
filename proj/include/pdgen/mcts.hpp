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

// Monte Carlo tree search for the reasoning trajectory behind a wrong answer.
//
// Each iteration selects a path by UCT, expands the leaf (B proposed steps
// plus a terminal "stop here" child), simulates the chosen child to a final
// answer, and backpropagates. A reasoning child is scored twice: once for
// the rollout and once for its own prefix concluded as an answer, each as a
// separate pass. A terminal child is scored once.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/domain.hpp"
#include "pdgen/rng.hpp"
#include "pdgen/serialization.hpp"

namespace pdgen {

enum class NodeKind { kReasoning, kTerminal };

std::string_view to_string(NodeKind kind);

struct TreeNode {
  NodeKind kind = NodeKind::kReasoning;
  std::optional<ReasoningStep> step;  // absent for the root and terminal nodes
  int visit_count = 0;
  double total_reward = 0.0;
  int depth = 0;
  bool expanded = false;
  std::vector<TreeNode> children;  // created once, never resized

  bool is_terminal() const { return kind == NodeKind::kTerminal; }
  // Expanded, and every non-terminal child visited at least once.
  bool fully_expanded() const;
};

double uct_score(const TreeNode& child, int parent_visits, double c);

struct SearchOptions {
  // Attach no terminal children and skip the concluded-prefix pass.
  bool no_terminal = false;
  // Skip plausibility scoring; every r2 is 0.
  bool no_eval = false;
};

// Stops at a terminal node, a node that is not fully expanded, a node at
// depth max_depth, or a node without children. Ties go to the earlier child.
std::vector<TreeNode*> select_path(TreeNode& root, const SearchParams& params);

struct LoggedTrajectory {
  ReasoningTrajectory trajectory;
  Reward reward;
};

// Among matching entries: highest plausibility, then fewer steps, then
// earliest logged.
std::optional<size_t> select_best(const std::vector<LoggedTrajectory>& log);

struct SearchStats {
  int iterations_run = 0;
  int nodes_created = 0;
  int root_visits = 0;
};

struct RecoveryResult {
  std::string record_id;
  bool matched = false;
  std::optional<ReasoningTrajectory> best_trajectory;
  double best_plausibility = 0.0;
  std::vector<LoggedTrajectory> trajectory_log;
  SearchStats stats;
};

// A backend failure that aborted a search, with the stats so far.
class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(const std::string& what, SearchStats stats) : std::runtime_error(what), stats_(stats) {}
  const SearchStats& stats() const { return stats_; }

 private:
  SearchStats stats_;
};

Reward score_trajectory(const ReasoningTrajectory& trajectory, bool no_answer, const QARecord& record,
                        const SearchParams& params, const ModelBackend& backend, const CallContext& ctx,
                        bool skip_plausibility = false);

class SearchTree {
 public:
  SearchTree(const QARecord& record, const SearchParams& params, const ModelBackend& backend,
             SearchOptions options = {});

  // Runs one iteration. Throws RecoveryError on backend failure.
  void iterate();
  RecoveryResult result() const;

  const TreeNode& root() const { return root_; }
  const std::vector<LoggedTrajectory>& log() const { return log_; }
  Json trace() const;

 private:
  CallContext next_call();
  // Steps on the path below the root.
  static std::vector<ReasoningStep> prefix_of(const std::vector<TreeNode*>& path);
  TreeNode* expand(TreeNode& node, const std::vector<ReasoningStep>& prefix);
  void log_trajectory(const ReasoningTrajectory& t, const Reward& r);
  void backpropagate(const std::vector<TreeNode*>& path, const Reward& reward);

  const QARecord& record_;
  SearchParams params_;
  const ModelBackend& backend_;
  SearchOptions options_;
  Rng rng_;
  TreeNode root_;
  std::vector<LoggedTrajectory> log_;
  SearchStats stats_;
};

// Runs exactly params.iterations iterations with an RNG seeded from
// (params.seed, record.record_id).
RecoveryResult recover(const QARecord& record, const SearchParams& params, const ModelBackend& backend,
                       SearchOptions options = {});

Json tree_to_json(const TreeNode& node);

}  // namespace pdgen
