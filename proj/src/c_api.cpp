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

#include "pdgen/pdgen.h"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/config.hpp"
#include "pdgen/dataset_io.hpp"
#include "pdgen/evaluation.hpp"
#include "pdgen/pipeline.hpp"

struct pdgen_config {
  std::string path;
  std::vector<pdgen::Override> overrides;
  pdgen::Config resolved;
};

namespace {

thread_local std::string g_last_error;

pdgen_status fail(pdgen_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, mapping exceptions to status codes.
template <typename Fn>
pdgen_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return PDGEN_OK;
  } catch (const pdgen::ConfigError& e) {
    return fail(PDGEN_ERR_CONFIG, e.what());
  } catch (const pdgen::DataError& e) {
    return fail(PDGEN_ERR_DATA, e.what());
  } catch (const pdgen::BackendError& e) {
    return fail(PDGEN_ERR_BACKEND, e.what());
  } catch (const pdgen::PipelineError& e) {
    return fail(PDGEN_ERR_COMMAND, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PDGEN_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PDGEN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PDGEN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PDGEN_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* pdgen_version(void) { return pdgen::version_string(); }

const char* pdgen_status_name(pdgen_status status) {
  switch (status) {
    case PDGEN_OK:
      return "ok";
    case PDGEN_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case PDGEN_ERR_CONFIG:
      return "configuration error";
    case PDGEN_ERR_IO:
      return "i/o error";
    case PDGEN_ERR_DATA:
      return "data error";
    case PDGEN_ERR_BACKEND:
      return "backend error";
    case PDGEN_ERR_COMMAND:
      return "command failed";
    case PDGEN_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* pdgen_last_error(void) { return g_last_error.c_str(); }

void pdgen_string_free(char* s) { std::free(s); }

pdgen_status pdgen_set_log_level(int level) {
  static const spdlog::level::level_enum levels[] = {spdlog::level::off,  spdlog::level::err,
                                                     spdlog::level::warn, spdlog::level::info,
                                                     spdlog::level::debug, spdlog::level::trace};
  if (level < 0 || level > 5) return fail(PDGEN_ERR_INVALID_ARGUMENT, "log level must be in [0, 5]");
  spdlog::set_level(levels[level]);
  return PDGEN_OK;
}

pdgen_status pdgen_config_new(const char* path, pdgen_config** out) {
  if (!out) return fail(PDGEN_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  return guarded([&] {
    auto cfg = std::make_unique<pdgen_config>();
    cfg->path = path ? path : "";
    cfg->resolved = pdgen::load_config(cfg->path);
    *out = cfg.release();
  });
}

void pdgen_config_free(pdgen_config* config) { delete config; }

pdgen_status pdgen_config_set(pdgen_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(PDGEN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto overrides = config->overrides;
    overrides.emplace_back(key, value);
    config->resolved = pdgen::load_config(config->path, overrides);
    config->overrides = std::move(overrides);
  });
}

pdgen_status pdgen_config_set_output(pdgen_config* config, const char* command, const char* path) {
  if (!config || !command || !path) return fail(PDGEN_ERR_INVALID_ARGUMENT, "null argument");
  std::string key;
  pdgen_status st = guarded([&] { key = pdgen::output_key_for(command); });
  if (st != PDGEN_OK) return st;
  return pdgen_config_set(config, key.c_str(), path);
}

pdgen_status pdgen_config_dump(const pdgen_config* config, char** json_out) {
  if (!config || !json_out) return fail(PDGEN_ERR_INVALID_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guarded([&] { *json_out = copy_out(pdgen::dump_document(config->resolved.snapshot)); });
}

pdgen_status pdgen_run(const pdgen_config* config, const char* command, char** summary_out) {
  if (!config || !command) return fail(PDGEN_ERR_INVALID_ARGUMENT, "null argument");
  if (summary_out) *summary_out = nullptr;
  return guarded([&] {
    pdgen::Json summary = pdgen::run_command(command, config->resolved);
    if (summary_out) *summary_out = copy_out(summary.dump(2));
  });
}

pdgen_status pdgen_answers_equivalent(const char* a, const char* b, int* out) {
  if (!a || !b || !out) return fail(PDGEN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = pdgen::evaluation::answers_equivalent(a, b) ? 1 : 0; });
}

}  // extern "C"
