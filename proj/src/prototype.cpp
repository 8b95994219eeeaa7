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

#include "pdgen/prototype.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "pdgen/rng.hpp"
#include "worker_pool.hpp"

namespace pdgen {
namespace {

struct RecordWork {
  std::vector<Concept> concepts;
  std::optional<RecoveryResult> recovery;
  std::optional<RecordFailure> failure;
  Json trace;
};

RecordWork process_record(const QARecord& record, const SearchParams& params, const ModelBackend& backend,
                          const BuildOptions& options) {
  RecordWork w;
  if (options.flags.no_concept) {
    w.concepts.emplace_back(kUniversalConcept);
  } else {
    try {
      w.concepts = backend.extract_concepts(record, CallContext{derive_seed(params.seed, "concepts:" + record.record_id)});
    } catch (const std::exception& e) {
      w.failure = RecordFailure{record.record_id, "concepts", e.what()};
      return w;
    }
  }
  SearchOptions search{options.flags.no_terminal, options.flags.no_eval};
  try {
    SearchTree tree(record, params, backend, search);
    for (int i = 0; i < params.iterations; ++i) tree.iterate();
    w.recovery = tree.result();
    if (options.keep_traces) w.trace = tree.trace();
  } catch (const RecoveryError& e) {
    w.failure = RecordFailure{record.record_id, "recovery", e.what()};
  }
  return w;
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string raw_trajectories_text(const std::vector<ReasoningTrajectory>& trajectories) {
  std::string out;
  for (size_t i = 0; i < trajectories.size(); ++i) {
    if (i) out += "\n\n";
    out += format_trajectory(trajectories[i]);
  }
  return out;
}

BuildResult build_prototype(const StudentDataset& dataset, const SearchParams& params, const ModelBackend& backend,
                            const BuildOptions& options) {
  if (std::string err = params.check(); !err.empty()) throw std::invalid_argument(err);
  const auto t0 = std::chrono::steady_clock::now();
  const auto& records = dataset.past_records;

  std::vector<RecordWork> work(records.size());
  parallel_for(records.size(), resolve_workers(options.workers),
               [&](size_t i) { work[i] = process_record(records[i], params, backend, options); });

  BuildResult out;
  out.prototype.student_id = dataset.student_id;
  out.report.student_id = dataset.student_id;
  out.report.records = static_cast<int>(records.size());

  std::vector<std::pair<std::vector<Concept>, SupportingTrajectory>> pairs;
  for (size_t i = 0; i < records.size(); ++i) {
    RecordWork& w = work[i];
    if (w.failure) {
      spdlog::warn("{}: {} failed: {}", records[i].record_id, w.failure->stage, w.failure->cause);
      out.report.failures.push_back(*w.failure);
      out.report.failed += 1;
      out.prototype.unrecovered_record_ids.push_back(records[i].record_id);
      out.recoveries.emplace_back();
      continue;
    }
    if (options.keep_traces) out.traces.push_back(std::move(w.trace));
    if (w.recovery->matched) {
      out.report.recovered += 1;
      pairs.emplace_back(w.concepts, SupportingTrajectory{records[i].record_id, *w.recovery->best_trajectory});
    } else {
      out.prototype.unrecovered_record_ids.push_back(records[i].record_id);
    }
    out.recoveries.push_back(std::move(w.recovery));
  }
  out.report.unrecovered = static_cast<int>(out.prototype.unrecovered_record_ids.size());

  for (auto& [concept_key, support] : group_by_concept(pairs)) {
    std::vector<ReasoningTrajectory> trajectories;
    for (const auto& s : support) trajectories.push_back(s.trajectory);
    MisconceptionEntry entry{concept_key, {}, support, static_cast<int>(support.size())};
    if (options.flags.no_summary) {
      entry.misconception = raw_trajectories_text(trajectories);
    } else {
      try {
        entry.misconception = backend.summarize(
            concept_key, trajectories,
            CallContext{derive_seed(params.seed, "summary:" + dataset.student_id + ":" + concept_key.label())});
      } catch (const std::exception& e) {
        spdlog::warn("{}: summary for '{}' failed, keeping raw trajectories: {}", dataset.student_id,
                     concept_key.label(), e.what());
        out.report.failures.push_back({"", "summary", concept_key.label() + ": " + e.what()});
        entry.misconception = raw_trajectories_text(trajectories);
      }
    }
    out.prototype.entries.push_back(std::move(entry));
  }

  if (out.report.records > 0) out.report.recovery_rate = double(out.report.recovered) / out.report.records;
  out.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Json report_to_json(const BuildReport& r) {
  Json j;
  j["student_id"] = r.student_id;
  j["records"] = r.records;
  j["recovered"] = r.recovered;
  j["unrecovered"] = r.unrecovered;
  j["failed"] = r.failed;
  j["recovery_rate"] = r.recovery_rate;
  j["wall_time_s"] = r.wall_time_s;
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back(Json{{"record_id", f.record_id}, {"stage", f.stage}, {"cause", f.cause}});
  }
  j["failures"] = std::move(failures);
  return j;
}

}  // namespace pdgen
