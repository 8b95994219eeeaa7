/*
 * Copyright 2026 The pdgen Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libpdgen. Handles are opaque; every call that can fail
 * returns a pdgen_status and leaves a message for pdgen_last_error() on the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with pdgen_string_free(). */

#ifndef PDGEN_PDGEN_H_
#define PDGEN_PDGEN_H_

#include <stdint.h>

#if defined(_WIN32)
#if defined(PDGEN_BUILDING_LIBRARY)
#define PDGEN_API __declspec(dllexport)
#else
#define PDGEN_API __declspec(dllimport)
#endif
#else
#define PDGEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdgen_status {
  PDGEN_OK = 0,
  PDGEN_ERR_INVALID_ARGUMENT = 1,
  PDGEN_ERR_CONFIG = 2,
  PDGEN_ERR_IO = 3,
  PDGEN_ERR_DATA = 4,
  PDGEN_ERR_BACKEND = 5,
  PDGEN_ERR_COMMAND = 6,
  PDGEN_ERR_INTERNAL = 7
} pdgen_status;

typedef struct pdgen_config pdgen_config;

PDGEN_API const char* pdgen_version(void);
PDGEN_API const char* pdgen_status_name(pdgen_status status);

/* Message for the last failed call on this thread; "" if none. */
PDGEN_API const char* pdgen_last_error(void);

PDGEN_API void pdgen_string_free(char* s);

/* 0 quiet ... 5 trace. */
PDGEN_API pdgen_status pdgen_set_log_level(int level);

/* path may be NULL or "" for the shipped defaults. Overrides added with
 * pdgen_config_set are applied on top of the file. */
PDGEN_API pdgen_status pdgen_config_new(const char* path, pdgen_config** out);
PDGEN_API void pdgen_config_free(pdgen_config* config);

/* Dotted key, e.g. "search.iterations", value as text. */
PDGEN_API pdgen_status pdgen_config_set(pdgen_config* config, const char* key, const char* value);

/* Points the main output of `command` at `path`. */
PDGEN_API pdgen_status pdgen_config_set_output(pdgen_config* config, const char* command, const char* path);

/* The fully resolved configuration as JSON. */
PDGEN_API pdgen_status pdgen_config_dump(const pdgen_config* config, char** json_out);

/* Commands: simulate, build, generate, evaluate, group, or run (all five).
 * summary_out may be NULL; otherwise it receives the JSON summary. */
PDGEN_API pdgen_status pdgen_run(const pdgen_config* config, const char* command, char** summary_out);

/* Answer equivalence, exposed for scripting. */
PDGEN_API pdgen_status pdgen_answers_equivalent(const char* a, const char* b, int* out);

#ifdef __cplusplus
}
#endif

#endif /* PDGEN_PDGEN_H_ */
