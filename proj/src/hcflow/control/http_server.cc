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

#include "hcflow/control/http_server.h"

#include <charconv>

#include "hcflow/json_io.h"
#include "httplib.h"

namespace hcflow {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void Reply(httplib::Response& res, int status, const json& doc) {
  res.status = status;
  res.set_content(doc.dump(), kJson);
}

// Runs `fn`, turning engine errors into structured error responses.
template <typename Fn>
void Handle(httplib::Response& res, int ok_status, Fn&& fn) {
  try {
    Reply(res, ok_status, fn());
  } catch (const Error& e) {
    Reply(res, HttpStatusFor(e.code()), ErrorToJson(e));
  } catch (const std::exception& e) {
    Reply(res, 500, ErrorToJson(Error(ErrorCode::kInternal, e.what())));
  }
}

PlanMode ModeParam(const httplib::Request& req) {
  if (!req.has_param("mode")) return PlanMode::kGreedy;
  return ParsePlanMode(req.get_param_value("mode"));
}

std::uint64_t SinceParam(const httplib::Request& req) {
  if (!req.has_param("since")) return 0;
  std::string s = req.get_param_value("since");
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument, "bad since parameter");
  }
  return v;
}

bool WantsStream(const httplib::Request& req) {
  if (req.has_param("stream") && req.get_param_value("stream") == "1") {
    return true;
  }
  return req.get_header_value("Accept").find("text/event-stream") !=
         std::string::npos;
}

}  // namespace

ListenAddress ParseListenAddress(std::string_view text) {
  ListenAddress addr;
  std::string_view port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) addr.host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  int port = 0;
  auto [ptr, ec] =
      std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || ec != std::errc() ||
      ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad listen address \"" + std::string(text) + "\"");
  }
  addr.port = port;
  return addr;
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownShell:
    case ErrorCode::kUnknownProcessor:
    case ErrorCode::kUnknownId:
      return 404;
    case ErrorCode::kInvalidState:
    case ErrorCode::kCommitFailed:
    case ErrorCode::kNotDeployable:
    case ErrorCode::kStaleHandle:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kDuplicateProcessorId:
      return 409;
    case ErrorCode::kPlanInfeasible:
    case ErrorCode::kInvalidGraph:
      return 422;
    case ErrorCode::kInternal:
    case ErrorCode::kIoError:
      return 500;
    default:
      return 400;
  }
}

ControlServer::ControlServer(Platform& platform)
    : platform_(platform),
      server_(std::make_unique<httplib::Server>()),
      stopping_(std::make_shared<std::atomic<bool>>(false)) {
  Routes();
}

ControlServer::~ControlServer() { Stop(); }

void ControlServer::Routes() {
  auto& s = *server_;

  s.Get("/processors", [this](const httplib::Request&, httplib::Response& res) {
    Handle(res, 200, [&] { return platform_.ListProcessors(); });
  });

  s.Get("/pipelines", [this](const httplib::Request&, httplib::Response& res) {
    Handle(res, 200, [&] { return platform_.ListPipelines(); });
  });

  s.Post("/pipelines", [this](const httplib::Request& req,
                              httplib::Response& res) {
    Handle(res, 201, [&] { return platform_.LoadPipeline(ParseJsonText(req.body)); });
  });

  s.Post("/hams", [this](const httplib::Request& req, httplib::Response& res) {
    Handle(res, 201, [&] { return platform_.LoadHam(ParseJsonText(req.body)); });
  });

  s.Post(R"(/pipelines/([A-Za-z0-9_-]+)/plan)",
         [this](const httplib::Request& req, httplib::Response& res) {
           Handle(res, 200, [&] {
             return platform_.Plan(req.matches[1].str(), ModeParam(req));
           });
         });

  s.Post(R"(/pipelines/([A-Za-z0-9_-]+)/start)",
         [this](const httplib::Request& req, httplib::Response& res) {
           Handle(res, 201, [&] {
             return platform_.Start(req.matches[1].str(), ModeParam(req));
           });
         });

  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/stop)",
         [this](const httplib::Request& req, httplib::Response& res) {
           Handle(res, 200, [&] { return platform_.Stop(req.matches[1].str()); });
         });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+))",
        [this](const httplib::Request& req, httplib::Response& res) {
          Handle(res, 200,
                 [&] { return platform_.Status(req.matches[1].str()); });
        });

  s.Get("/events", [this](const httplib::Request& req, httplib::Response& res) {
    std::uint64_t since = 0;
    try {
      since = SinceParam(req);
    } catch (const Error& e) {
      Reply(res, HttpStatusFor(e.code()), ErrorToJson(e));
      return;
    }
    if (!WantsStream(req)) {
      Handle(res, 200, [&] { return platform_.Events(since); });
      return;
    }
    auto cursor = std::make_shared<std::uint64_t>(since);
    auto stopping = stopping_;
    Platform* platform = &platform_;
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [platform, cursor, stopping](std::size_t, httplib::DataSink& sink) {
          if (*stopping) return false;
          platform->events().WaitNewer(*cursor, std::chrono::milliseconds(250));
          for (const auto& e : platform->events().Since(*cursor)) {
            std::string frame = "id: " + std::to_string(e.seq) +
                                "\nevent: " + e.kind +
                                "\ndata: " + EventToJson(e).dump() + "\n\n";
            if (!sink.write(frame.data(), frame.size())) return false;
            *cursor = e.seq;
          }
          return !*stopping;
        });
  });
}

int ControlServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ <= 0) throw Error(ErrorCode::kIoError, "cannot bind " + host);
  } else {
    if (!server_->bind_to_port(host, port)) {
      throw Error(ErrorCode::kIoError,
                  "cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }
  return port_;
}

void ControlServer::Serve() { server_->listen_after_bind(); }

void ControlServer::ServeInBackground() {
  thread_ = std::thread([this] { Serve(); });
  server_->wait_until_ready();
}

void ControlServer::Stop() {
  *stopping_ = true;
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

int HttpRequest(const ListenAddress& address, std::string_view method,
                const std::string& path, const std::string& body,
                std::string* response_body) {
  httplib::Client client(address.host, address.port);
  client.set_connection_timeout(std::chrono::seconds(5));
  httplib::Result result =
      method == "POST" ? client.Post(path, body, kJson) : client.Get(path);
  if (!result) {
    throw Error(ErrorCode::kIoError,
                "cannot reach " + address.host + ":" +
                    std::to_string(address.port) + " (" +
                    httplib::to_string(result.error()) + ")");
  }
  if (response_body) *response_body = result->body;
  return result->status;
}

}  // namespace hcflow
