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

#include "pdgen/distractor.hpp"

#include "pdgen/evaluation.hpp"
#include "pdgen/prototype.hpp"
#include "pdgen/rng.hpp"
#include "worker_pool.hpp"

namespace pdgen {

std::vector<std::string> retrieve_misconceptions(const MisconceptionPrototype& prototype,
                                                 const std::vector<Concept>& question_concepts) {
  std::vector<std::string> out;
  for (const auto& c : question_concepts) {
    if (const MisconceptionEntry* e = prototype.find(c)) out.push_back(e->misconception);
  }
  return out;
}

PersonalizedDistractor generate(const QARecord& question, const MisconceptionPrototype& prototype,
                                const ModelBackend& backend, const GenerateOptions& options) {
  QARecord blind = question;
  blind.chosen_answer.clear();
  blind.options.reset();

  std::vector<Concept> concepts;
  if (options.no_concept) {
    concepts.emplace_back(kUniversalConcept);
  } else {
    try {
      concepts = backend.extract_concepts(blind, CallContext{derive_seed(options.seed, "concepts:" + blind.record_id)});
    } catch (const BackendError& e) {
      // Without concepts nothing is retrieved; the backend still guesses.
      if (e.kind() != BackendError::Kind::kEmptyExtraction) throw GenerationFailure(e.what());
    }
  }

  PersonalizedDistractor out;
  out.question_record_id = question.record_id;
  std::vector<std::string> misconceptions;
  for (const auto& c : concepts) {
    if (const MisconceptionEntry* e = prototype.find(c)) {
      misconceptions.push_back(e->misconception);
      out.used_misconceptions.push_back(c);
    }
  }

  Rng rng(derive_seed(options.seed, "predict:" + blind.record_id));
  for (int attempt = 0; attempt < 2; ++attempt) {
    DistractorPrediction p;
    try {
      p = backend.predict_distractor(blind.stem, blind.correct_answer, misconceptions, CallContext{rng.next()});
    } catch (const BackendError& e) {
      throw GenerationFailure(e.what());
    }
    if (p.answer.empty() || evaluation::answers_equivalent(p.answer, blind.correct_answer)) continue;
    out.distractor = p.answer;
    out.rationale_trajectory = std::move(p.trajectory);
    return out;
  }
  throw GenerationFailure("backend returned the correct answer twice for " + question.record_id);
}

std::vector<GenerationOutcome> generate_batch(const std::vector<QARecord>& questions,
                                              const MisconceptionPrototype& prototype, const ModelBackend& backend,
                                              const GenerateOptions& options, int workers) {
  std::vector<GenerationOutcome> out(questions.size());
  parallel_for(questions.size(), resolve_workers(workers), [&](size_t i) {
    out[i].record_id = questions[i].record_id;
    try {
      out[i].distractor = generate(questions[i], prototype, backend, options);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace pdgen
