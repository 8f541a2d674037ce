// Copyright 2026 The hcflow Authors
//
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

#include "hcflow/hcflow.h"

#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include "hcflow/control/http_server.h"
#include "hcflow/control/platform.h"
#include "hcflow/json_io.h"

struct hcf_platform {
  explicit hcf_platform(hcflow::RunOptions options) : platform(options) {}
  hcflow::Platform platform;
};

struct hcf_server {
  explicit hcf_server(hcflow::Platform& platform) : server(platform) {}
  hcflow::ControlServer server;
  std::mutex mu;
  std::condition_variable cv;
  bool stopped = false;
};

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char** out, const json& doc) {
  if (out) *out = CopyString(doc.dump());
}

hcf_status Fail(char** out, const hcflow::Error& e) {
  Emit(out, hcflow::ErrorToJson(e));
  return static_cast<hcf_status>(e.code());
}

// Runs `fn` and converts its result or failure into the C calling convention.
template <typename Fn>
hcf_status Call(char** out, Fn&& fn) {
  if (out) *out = nullptr;
  try {
    Emit(out, fn());
    return HCF_OK;
  } catch (const hcflow::Error& e) {
    return Fail(out, e);
  } catch (const std::bad_alloc&) {
    return HCF_INTERNAL;
  } catch (const std::exception& e) {
    return Fail(out, hcflow::Error(hcflow::ErrorCode::kInternal, e.what()));
  }
}

hcflow::Error NullArgument(const char* name) {
  return hcflow::Error(hcflow::ErrorCode::kInvalidArgument,
                       std::string(name) + " must not be null");
}

hcflow::Platform& Get(hcf_platform* p) {
  if (!p) throw NullArgument("platform");
  return p->platform;
}

std::string Str(const char* s, const char* name) {
  if (!s) throw NullArgument(name);
  return s;
}

hcflow::PlanMode Mode(hcf_plan_mode mode) {
  switch (mode) {
    case HCF_PLAN_GREEDY:
      return hcflow::PlanMode::kGreedy;
    case HCF_PLAN_EXHAUSTIVE:
      return hcflow::PlanMode::kExhaustive;
  }
  throw hcflow::Error(hcflow::ErrorCode::kInvalidArgument, "bad plan mode");
}

hcflow::ListenAddress Listen(const char* listen) {
  if (listen) return hcflow::ParseListenAddress(listen);
  if (const char* env = std::getenv(hcflow::kListenEnvVar); env && *env) {
    return hcflow::ParseListenAddress(env);
  }
  return hcflow::ListenAddress{};
}

}  // namespace

extern "C" {

const char* hcf_version(void) { return kVersion; }

const char* hcf_status_name(hcf_status status) {
  if (status == HCF_OK) return "OK";
  for (hcflow::ErrorCode code : hcflow::AllErrorCodes()) {
    if (static_cast<int>(code) == static_cast<int>(status)) {
      return hcflow::ErrorCodeName(code).data();
    }
  }
  return "UNKNOWN";
}

void hcf_string_free(char* s) { std::free(s); }

hcf_status hcf_platform_create(uint32_t channel_capacity, hcf_platform** out) {
  if (!out) return HCF_INVALID_ARGUMENT;
  *out = nullptr;
  hcflow::RunOptions options;
  if (channel_capacity > 0) options.channel_capacity = channel_capacity;
  try {
    *out = new hcf_platform(options);
    return HCF_OK;
  } catch (...) {
    return HCF_INTERNAL;
  }
}

void hcf_platform_destroy(hcf_platform* platform) { delete platform; }

hcf_status hcf_load_ham(hcf_platform* platform, const char* text, char** out) {
  return Call(out, [&] {
    return Get(platform).LoadHam(
        hcflow::ParseJsonText(Str(text, "json")));
  });
}

hcf_status hcf_load_ham_file(hcf_platform* platform, const char* path,
                             char** out) {
  return Call(out, [&] {
    return Get(platform).LoadHam(hcflow::ReadJsonFile(Str(path, "path")));
  });
}

hcf_status hcf_list_processors(hcf_platform* platform, char** out) {
  return Call(out, [&] { return Get(platform).ListProcessors(); });
}

hcf_status hcf_load_pipeline(hcf_platform* platform, const char* text,
                             char** out) {
  return Call(out, [&] {
    return Get(platform).LoadPipeline(
        hcflow::ParseJsonText(Str(text, "json")));
  });
}

hcf_status hcf_load_pipeline_file(hcf_platform* platform, const char* path,
                                  char** out) {
  return Call(out, [&] {
    return Get(platform).LoadPipeline(hcflow::ReadJsonFile(Str(path, "path")));
  });
}

hcf_status hcf_list_pipelines(hcf_platform* platform, char** out) {
  return Call(out, [&] { return Get(platform).ListPipelines(); });
}

hcf_status hcf_validate_pipeline_file(const char* path, char** out) {
  return Call(out, [&] {
    hcflow::Platform scratch;
    json doc = scratch.LoadPipeline(hcflow::ReadJsonFile(Str(path, "path")));
    if (!doc["valid"].get<bool>()) {
      throw hcflow::Error(hcflow::ErrorCode::kInvalidGraph,
                          "pipeline \"" + doc["id"].get<std::string>() +
                              "\" has violations",
                          {{"violations", doc["violations"]}});
    }
    return doc;
  });
}

hcf_status hcf_plan(hcf_platform* platform, const char* pipeline_id,
                    hcf_plan_mode mode, char** out) {
  return Call(out, [&] {
    return Get(platform).Plan(Str(pipeline_id, "pipeline_id"), Mode(mode));
  });
}

hcf_status hcf_start(hcf_platform* platform, const char* pipeline_id,
                     hcf_plan_mode mode, char** out) {
  return Call(out, [&] {
    return Get(platform).Start(Str(pipeline_id, "pipeline_id"), Mode(mode));
  });
}

hcf_status hcf_stop(hcf_platform* platform, const char* session_id,
                    char** out) {
  return Call(out, [&] {
    return Get(platform).Stop(Str(session_id, "session_id"));
  });
}

hcf_status hcf_session_status(hcf_platform* platform, const char* session_id,
                              char** out) {
  return Call(out, [&] {
    return Get(platform).Status(Str(session_id, "session_id"));
  });
}

hcf_status hcf_wait_session(hcf_platform* platform, const char* session_id,
                            uint32_t timeout_ms, int* finished) {
  if (finished) *finished = 0;
  return Call(nullptr, [&] {
    bool done = Get(platform).WaitForSession(
        Str(session_id, "session_id"), std::chrono::milliseconds(timeout_ms));
    if (finished) *finished = done ? 1 : 0;
    return json();
  });
}

hcf_status hcf_events(hcf_platform* platform, uint64_t after, char** out) {
  return Call(out, [&] { return Get(platform).Events(after); });
}

hcf_status hcf_server_start(hcf_platform* platform, const char* listen,
                            hcf_server** out) {
  if (!out) return HCF_INVALID_ARGUMENT;
  *out = nullptr;
  return Call(nullptr, [&] {
    hcflow::ListenAddress address = Listen(listen);
    auto server = std::make_unique<hcf_server>(Get(platform));
    server->server.Bind(address.host, address.port);
    server->server.ServeInBackground();
    *out = server.release();
    return json();
  });
}

int hcf_server_port(const hcf_server* server) {
  return server ? server->server.port() : 0;
}

void hcf_server_wait(hcf_server* server) {
  if (!server) return;
  std::unique_lock lock(server->mu);
  server->cv.wait(lock, [&] { return server->stopped; });
}

void hcf_server_stop(hcf_server* server) {
  if (!server) return;
  server->server.Stop();
  {
    std::lock_guard lock(server->mu);
    server->stopped = true;
  }
  server->cv.notify_all();
}

void hcf_server_destroy(hcf_server* server) {
  if (!server) return;
  hcf_server_stop(server);
  delete server;
}

hcf_status hcf_http_get(const char* listen, const char* path, int* http_status,
                        char** out) {
  if (http_status) *http_status = 0;
  if (out) *out = nullptr;
  try {
    std::string body;
    int status =
        hcflow::HttpRequest(Listen(listen), "GET", Str(path, "path"), "", &body);
    if (http_status) *http_status = status;
    if (out) *out = CopyString(body);
    return HCF_OK;
  } catch (const hcflow::Error& e) {
    return Fail(out, e);
  } catch (const std::exception& e) {
    return Fail(out, hcflow::Error(hcflow::ErrorCode::kInternal, e.what()));
  }
}

}  // extern "C"
