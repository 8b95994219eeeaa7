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


// Exercises libpdgen through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "pdgen/pdgen.h"

namespace {

struct ConfigHandle {
  pdgen_config* ptr = nullptr;
  ~ConfigHandle() { pdgen_config_free(ptr); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  pdgen_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(pdgen_version()).rfind("0.", 0) == 0);
  CHECK(std::string(pdgen_status_name(PDGEN_OK)) == "ok");
  CHECK(std::string(pdgen_status_name(PDGEN_ERR_DATA)) == "data error");
  CHECK(std::string(pdgen_status_name(static_cast<pdgen_status>(99))) == "unknown status");
  CHECK(pdgen_set_log_level(0) == PDGEN_OK);
  CHECK(pdgen_set_log_level(9) == PDGEN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config handles") {
  ConfigHandle c;
  REQUIRE(pdgen_config_new(nullptr, &c.ptr) == PDGEN_OK);
  CHECK(pdgen_config_set(c.ptr, "search.iterations", "20") == PDGEN_OK);
  char* json = nullptr;
  REQUIRE(pdgen_config_dump(c.ptr, &json) == PDGEN_OK);
  CHECK(take(json).find("\"iterations\": 20") != std::string::npos);

  CHECK(pdgen_config_set(c.ptr, "search.iterations", "many") == PDGEN_ERR_CONFIG);
  CHECK(std::string(pdgen_last_error()).find("search.iterations") != std::string::npos);
  // A rejected override leaves the handle unchanged.
  REQUIRE(pdgen_config_dump(c.ptr, &json) == PDGEN_OK);
  CHECK(take(json).find("\"iterations\": 20") != std::string::npos);

  CHECK(pdgen_config_set_output(c.ptr, "fly", "x") == PDGEN_ERR_CONFIG);
  CHECK(pdgen_config_set(nullptr, "a", "b") == PDGEN_ERR_INVALID_ARGUMENT);
  CHECK(pdgen_config_new(nullptr, nullptr) == PDGEN_ERR_INVALID_ARGUMENT);

  pdgen_config* missing = nullptr;
  CHECK(pdgen_config_new("/nonexistent/pdgen.json", &missing) == PDGEN_ERR_CONFIG);
  CHECK(missing == nullptr);
  CHECK(std::string(pdgen_last_error()).find("/nonexistent/pdgen.json") != std::string::npos);
}

TEST_CASE("running commands") {
  std::random_device rd;
  auto dir = std::filesystem::temp_directory_path() / ("pdgen-capi-" + std::to_string(rd()));
  ConfigHandle c;
  REQUIRE(pdgen_config_new("", &c.ptr) == PDGEN_OK);
  pdgen_set_log_level(0);
  CHECK(pdgen_config_set(c.ptr, "paths.dataset", (dir / "missing").c_str()) == PDGEN_OK);
  char* summary = nullptr;
  CHECK(pdgen_run(c.ptr, "build", &summary) == PDGEN_ERR_COMMAND);
  CHECK(summary == nullptr);
  CHECK(std::string(pdgen_last_error()).find((dir / "missing").string()) != std::string::npos);

  CHECK(pdgen_config_set_output(c.ptr, "simulate", (dir / "ds").c_str()) == PDGEN_OK);
  CHECK(pdgen_config_set(c.ptr, "paths.manifests", (dir / "manifests").c_str()) == PDGEN_OK);
  CHECK(pdgen_config_set(c.ptr, "paths.group_questions", (dir / "ds/group.jsonl").c_str()) == PDGEN_OK);
  CHECK(pdgen_config_set(c.ptr, "simulate.n_students", "2") == PDGEN_OK);
  CHECK(pdgen_config_set(c.ptr, "simulate.n_past", "3") == PDGEN_OK);
  REQUIRE(pdgen_run(c.ptr, "simulate", &summary) == PDGEN_OK);
  CHECK(take(summary).find("\"students\": 2") != std::string::npos);
  CHECK(std::string(pdgen_last_error()).empty());
  CHECK(pdgen_run(c.ptr, "fly", nullptr) == PDGEN_ERR_COMMAND);
  std::filesystem::remove_all(dir);
}

TEST_CASE("answer equivalence") {
  int eq = -1;
  CHECK(pdgen_answers_equivalent("1/2", "0.5", &eq) == PDGEN_OK);
  CHECK(eq == 1);
  CHECK(pdgen_answers_equivalent("x < 3", "x > 3", &eq) == PDGEN_OK);
  CHECK(eq == 0);
  CHECK(pdgen_answers_equivalent(nullptr, "1", &eq) == PDGEN_ERR_INVALID_ARGUMENT);
}
