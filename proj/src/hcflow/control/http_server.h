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

// HTTP front end for Platform.
//
//   GET  /processors
//   GET  /pipelines
//   POST /pipelines                      body: pipeline definition
//   POST /hams                           body: HAM manifest
//   POST /pipelines/{id}/plan?mode=      greedy (default) | exhaustive
//   POST /pipelines/{id}/start?mode=
//   POST /sessions/{id}/stop
//   GET  /sessions/{id}
//   GET  /events?since=N                 polling; with "Accept:
//                                        text/event-stream" (or &stream=1)
//                                        the response is an SSE stream
//
// Bodies are JSON. Errors carry ErrorToJson payloads with a matching HTTP
// status (400, 404, 409, 422 or 500).

#ifndef HCFLOW_CONTROL_HTTP_SERVER_H_
#define HCFLOW_CONTROL_HTTP_SERVER_H_

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "hcflow/control/platform.h"
#include "hcflow/error.h"

namespace httplib {
class Server;
}

namespace hcflow {

inline constexpr int kDefaultPort = 8470;
inline constexpr const char* kListenEnvVar = "HCFLOW_LISTEN";

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;
};

// Accepts "host:port", ":port" or "port". Throws Error{kInvalidArgument}.
ListenAddress ParseListenAddress(std::string_view text);

int HttpStatusFor(ErrorCode code);

class ControlServer {
 public:
  explicit ControlServer(Platform& platform);
  ~ControlServer();

  ControlServer(const ControlServer&) = delete;
  ControlServer& operator=(const ControlServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port. Throws
  // Error{kIoError}.
  int Bind(const std::string& host, int port);

  // Blocks until Stop. Requires Bind.
  void Serve();

  // Serve on a background thread.
  void ServeInBackground();

  void Stop();

  int port() const { return port_; }

 private:
  void Routes();

  Platform& platform_;
  std::unique_ptr<httplib::Server> server_;
  std::shared_ptr<std::atomic<bool>> stopping_;
  std::thread thread_;
  int port_ = 0;
};

// Minimal client used by the CLI. Returns the HTTP status and fills `body`.
// Throws Error{kIoError} when the server cannot be reached.
int HttpRequest(const ListenAddress& address, std::string_view method,
                const std::string& path, const std::string& body,
                std::string* response_body);

}  // namespace hcflow

#endif  // HCFLOW_CONTROL_HTTP_SERVER_H_
