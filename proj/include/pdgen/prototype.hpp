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

// Stage one: per-record concept extraction and trajectory recovery, then a
// per-concept summary of the recovered trajectories.

#pragma once

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/domain.hpp"
#include "pdgen/mcts.hpp"
#include "pdgen/serialization.hpp"

namespace pdgen {

// Ablation switches.
struct BuildFlags {
  bool no_concept = false;   // one universal concept for every record
  bool no_terminal = false;  // no terminal children in the search tree
  bool no_eval = false;      // alpha forced to 0
  bool no_summary = false;   // misconception = raw trajectories, verbatim

  friend bool operator==(const BuildFlags&, const BuildFlags&) = default;
};

// Concept label used for every record under no_concept.
inline constexpr std::string_view kUniversalConcept = "all";

// Concept -> trajectories, in order of first appearance. A concept repeated
// within one record counts once for that record.
template <typename T>
using ConceptGroups = std::vector<std::pair<Concept, std::vector<T>>>;

template <typename T>
ConceptGroups<T> group_by_concept(const std::vector<std::pair<std::vector<Concept>, T>>& pairs) {
  ConceptGroups<T> out;
  for (const auto& [concepts, item] : pairs) {
    std::vector<Concept> seen;
    for (const auto& c : concepts) {
      if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
      seen.push_back(c);
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& g) { return g.first == c; });
      if (it == out.end()) {
        out.emplace_back(c, std::vector<T>{});
        it = std::prev(out.end());
      }
      it->second.push_back(item);
    }
  }
  return out;
}

struct RecordFailure {
  std::string record_id;
  std::string stage;  // concepts | recovery | summary
  std::string cause;
};

struct BuildReport {
  std::string student_id;
  int records = 0;
  int recovered = 0;
  int unrecovered = 0;  // includes failed records
  int failed = 0;
  double recovery_rate = 0.0;  // recovered / records, 0 when empty
  double wall_time_s = 0.0;
  std::vector<RecordFailure> failures;
};

struct BuildOptions {
  BuildFlags flags;
  int workers = 1;  // 0 = hardware concurrency
  bool keep_traces = false;
};

struct BuildResult {
  MisconceptionPrototype prototype;
  BuildReport report;
  // Per past record, in dataset order; absent when the record failed.
  std::vector<std::optional<RecoveryResult>> recoveries;
  std::vector<Json> traces;  // filled when keep_traces
};

BuildResult build_prototype(const StudentDataset& dataset, const SearchParams& params, const ModelBackend& backend,
                            const BuildOptions& options = {});

// Text stored as the misconception under no_summary.
std::string raw_trajectories_text(const std::vector<ReasoningTrajectory>& trajectories);

int resolve_workers(int requested);

Json report_to_json(const BuildReport& report);

}  // namespace pdgen
