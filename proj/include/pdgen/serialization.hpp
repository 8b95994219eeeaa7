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

// JSON forms of the domain types. Field names follow the type definitions
// one-to-one; key order is fixed so emitted files are byte-stable.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pdgen/domain.hpp"

namespace pdgen {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const QARecord& v);
void from_json(const Json& j, QARecord& v);

void to_json(Json& j, const ReasoningStep& v);
void from_json(const Json& j, ReasoningStep& v);

void to_json(Json& j, const ReasoningTrajectory& v);
void from_json(const Json& j, ReasoningTrajectory& v);

void to_json(Json& j, const SearchParams& v);
void from_json(const Json& j, SearchParams& v);

void to_json(Json& j, const Reward& v);
void from_json(const Json& j, Reward& v);

void to_json(Json& j, const SupportingTrajectory& v);
void from_json(const Json& j, SupportingTrajectory& v);

void to_json(Json& j, const MisconceptionEntry& v);

void to_json(Json& j, const MisconceptionPrototype& v);
void from_json(const Json& j, MisconceptionPrototype& v);

void to_json(Json& j, const PersonalizedDistractor& v);

void to_json(Json& j, const StudentDataset& v);
void from_json(const Json& j, StudentDataset& v);

void to_json(Json& j, const ValidationError& v);

// One compact JSON object per line.
std::string to_jsonl(const std::vector<QARecord>& records);
std::vector<QARecord> records_from_jsonl(const std::string& text);

}  // namespace pdgen

namespace nlohmann {

// Concept has no default constructor.
template <>
struct adl_serializer<pdgen::Concept> {
  static pdgen::Concept from_json(const pdgen::Json& j) { return pdgen::Concept(j.get<std::string>()); }
  static void to_json(pdgen::Json& j, const pdgen::Concept& c) { j = c.label(); }
};

template <>
struct adl_serializer<pdgen::MisconceptionEntry> {
  static pdgen::MisconceptionEntry from_json(const pdgen::Json& j);
  static void to_json(pdgen::Json& j, const pdgen::MisconceptionEntry& e) { pdgen::to_json(j, e); }
};

template <>
struct adl_serializer<pdgen::PersonalizedDistractor> {
  static pdgen::PersonalizedDistractor from_json(const pdgen::Json& j);
  static void to_json(pdgen::Json& j, const pdgen::PersonalizedDistractor& d) { pdgen::to_json(j, d); }
};

}  // namespace nlohmann
