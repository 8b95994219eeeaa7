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

// Stage two: prototype-guided distractor generation for unseen questions.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/domain.hpp"

namespace pdgen {

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact lookup on normalized labels, in question-concept order.
std::vector<std::string> retrieve_misconceptions(const MisconceptionPrototype& prototype,
                                                 const std::vector<Concept>& question_concepts);

struct GenerateOptions {
  bool no_concept = false;  // must match the flag the prototype was built with
  std::uint64_t seed = 0;
};

// The question's chosen_answer, if any, is never shown to the backend.
// Throws GenerationFailure when no valid distractor comes back.
PersonalizedDistractor generate(const QARecord& question, const MisconceptionPrototype& prototype,
                                const ModelBackend& backend, const GenerateOptions& options = {});

struct GenerationOutcome {
  std::string record_id;
  std::optional<PersonalizedDistractor> distractor;
  std::string error;  // set when distractor is absent
};

// One outcome per question, in input order. Failures do not stop the batch.
std::vector<GenerationOutcome> generate_batch(const std::vector<QARecord>& questions,
                                              const MisconceptionPrototype& prototype, const ModelBackend& backend,
                                              const GenerateOptions& options = {}, int workers = 1);

}  // namespace pdgen
