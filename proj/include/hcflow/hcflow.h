/* Copyright 2026 The hcflow Authors
 *
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

/* C interface to the hcflow engine.
 *
 * Every call returns an hcf_status. Calls that take a `char** out` store a
 * NUL-terminated JSON document there on success and on failure; on failure
 * the document is {"v":1,"error":{"code":...,"message":...,"detail":...}}.
 * Release it with hcf_string_free. `out` may be NULL when the caller does not
 * want the document.
 *
 * Handles are safe to use from several threads. Destroying a platform stops
 * its sessions; destroy servers before the platform they serve.
 */

#ifndef HCFLOW_HCFLOW_H_
#define HCFLOW_HCFLOW_H_

#include <stdint.h>

#if defined(_WIN32)
#define HCF_API __declspec(dllexport)
#else
#define HCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hcf_status {
  HCF_OK = 0,
  HCF_EMPTY_TAG = 1,
  HCF_EMPTY_DESCRIPTOR = 2,
  HCF_ILLEGAL_CHARACTER = 3,
  HCF_UNKNOWN_ID = 4,
  HCF_DUPLICATE_ID = 10,
  HCF_UNKNOWN_SHELL = 11,
  HCF_UNKNOWN_PORT = 12,
  HCF_DIRECTION_MISMATCH = 13,
  HCF_TYPE_MISMATCH = 14,
  HCF_INPUT_ALREADY_BOUND = 15,
  HCF_OUTPUT_ALREADY_CONNECTED = 16,
  HCF_CYCLE_DETECTED = 17,
  HCF_INVALID_ARGUMENT = 18,
  HCF_DUPLICATE_PROCESSOR_ID = 20,
  HCF_BAD_TAG = 21,
  HCF_UNKNOWN_BACKEND_KIND = 22,
  HCF_NOT_DEPLOYABLE = 23,
  HCF_UNKNOWN_PROCESSOR = 24,
  HCF_STALE_HANDLE = 25,
  HCF_UNKNOWN_OPERATOR = 26,
  HCF_OPERATOR_FAULT = 27,
  HCF_INVALID_GRAPH = 30,
  HCF_COMMIT_FAILED = 31,
  HCF_PLAN_INFEASIBLE = 32,
  HCF_PUT_AFTER_CLOSE = 40,
  HCF_INVALID_STATE = 41,
  HCF_NOT_FOUND = 50,
  HCF_PARSE_ERROR = 51,
  HCF_IO_ERROR = 52,
  HCF_INTERNAL = 99
} hcf_status;

typedef enum hcf_plan_mode {
  HCF_PLAN_GREEDY = 0,
  HCF_PLAN_EXHAUSTIVE = 1
} hcf_plan_mode;

typedef struct hcf_platform hcf_platform;
typedef struct hcf_server hcf_server;

/* Library version, e.g. "0.1.0". Static storage. */
HCF_API const char* hcf_version(void);

/* Upper-case name of a status ("OK", "NOT_FOUND", ...). Static storage. */
HCF_API const char* hcf_status_name(hcf_status status);

HCF_API void hcf_string_free(char* s);

/* channel_capacity 0 selects the default. */
HCF_API hcf_status hcf_platform_create(uint32_t channel_capacity,
                                       hcf_platform** out);
HCF_API void hcf_platform_destroy(hcf_platform* platform);

HCF_API hcf_status hcf_load_ham(hcf_platform* platform, const char* json,
                                char** out);
HCF_API hcf_status hcf_load_ham_file(hcf_platform* platform, const char* path,
                                     char** out);
HCF_API hcf_status hcf_list_processors(hcf_platform* platform, char** out);

/* Loads a pipeline even when it has violations; see "valid" in the reply. */
HCF_API hcf_status hcf_load_pipeline(hcf_platform* platform, const char* json,
                                     char** out);
HCF_API hcf_status hcf_load_pipeline_file(hcf_platform* platform,
                                          const char* path, char** out);
HCF_API hcf_status hcf_list_pipelines(hcf_platform* platform, char** out);

/* Checks a pipeline file without loading it. Returns HCF_INVALID_GRAPH with
 * the violations as detail when the graph is not executable. */
HCF_API hcf_status hcf_validate_pipeline_file(const char* path, char** out);

HCF_API hcf_status hcf_plan(hcf_platform* platform, const char* pipeline_id,
                            hcf_plan_mode mode, char** out);
HCF_API hcf_status hcf_start(hcf_platform* platform, const char* pipeline_id,
                             hcf_plan_mode mode, char** out);
HCF_API hcf_status hcf_stop(hcf_platform* platform, const char* session_id,
                            char** out);
HCF_API hcf_status hcf_session_status(hcf_platform* platform,
                                      const char* session_id, char** out);

/* Waits up to timeout_ms for the session to stop or fail. *finished is set
 * to 1 when it did. */
HCF_API hcf_status hcf_wait_session(hcf_platform* platform,
                                    const char* session_id,
                                    uint32_t timeout_ms, int* finished);

HCF_API hcf_status hcf_events(hcf_platform* platform, uint64_t after,
                              char** out);

/* Serves the platform over HTTP on a background thread. `listen` is
 * "host:port"; port 0 picks a free port. NULL uses $HCFLOW_LISTEN or
 * 127.0.0.1:8470. */
HCF_API hcf_status hcf_server_start(hcf_platform* platform, const char* listen,
                                    hcf_server** out);
HCF_API int hcf_server_port(const hcf_server* server);
/* Blocks until hcf_server_stop is called from another thread. */
HCF_API void hcf_server_wait(hcf_server* server);
HCF_API void hcf_server_stop(hcf_server* server);
HCF_API void hcf_server_destroy(hcf_server* server);

/* Issues a GET against a running server. `listen` as for hcf_server_start.
 * *http_status receives the HTTP status; *out the response body. */
HCF_API hcf_status hcf_http_get(const char* listen, const char* path,
                                int* http_status, char** out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* HCFLOW_HCFLOW_H_ */
