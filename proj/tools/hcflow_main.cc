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

// Command-line front end. Talks to the engine only through the C API.
//
// Exit status: 0 success, 1 domain error (structured error on stdout),
// 2 usage error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hcflow/hcflow.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Loaded when no --ham is given so the sample pipelines run out of the box.
constexpr const char* kDefaultHam = R"({
  "v": 1,
  "ham_id": "local",
  "name": "single host with a simulated FPGA",
  "processors": [
    {"id": "cpu0", "accept_tag": "cpu", "backend_kind": "host-executor",
     "capacity": {"cores": 8, "mem_mb": 4096}},
    {"id": "fpga0", "accept_tag": "fpga.xilinx", "backend_kind": "simulated-fpga",
     "capacity": {"luts": 100000, "brams": 64}},
    {"id": "io0", "accept_tag": "io", "backend_kind": "source-sink",
     "capacity": {"ports": 16}}
  ]
})";

std::atomic<bool> g_interrupted{false};

extern "C" void OnSignal(int) { g_interrupted = true; }

// Owns a string returned by the C API.
class Doc {
 public:
  Doc() = default;
  ~Doc() { hcf_string_free(s_); }
  Doc(const Doc&) = delete;
  Doc& operator=(const Doc&) = delete;

  char** out() { return &s_; }
  json Parse() const { return s_ ? json::parse(s_) : json(); }

 private:
  char* s_ = nullptr;
};

// Thrown to unwind to main with a domain error already printed.
struct DomainFailure {};

void Print(const json& doc) { std::cout << doc.dump(2) << std::endl; }

json Check(hcf_status status, const Doc& doc) {
  json parsed = doc.Parse();
  if (status != HCF_OK) {
    if (parsed.is_null()) {
      parsed = {{"v", 1},
                {"error", {{"code", hcf_status_name(status)},
                           {"message", "call failed"}}}};
    }
    Print(parsed);
    throw DomainFailure{};
  }
  return parsed;
}

class Session {
 public:
  explicit Session(const std::vector<std::string>& hams) {
    if (hcf_platform_create(0, &platform_) != HCF_OK) {
      std::cerr << "cannot create platform\n";
      throw DomainFailure{};
    }
    if (hams.empty()) {
      Doc doc;
      Check(hcf_load_ham(platform_, kDefaultHam, doc.out()), doc);
    }
    for (const auto& path : hams) {
      Doc doc;
      Check(hcf_load_ham_file(platform_, path.c_str(), doc.out()), doc);
    }
  }
  ~Session() { hcf_platform_destroy(platform_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  hcf_platform* get() { return platform_; }

  // Loads the pipeline and fails with INVALID_GRAPH when it has violations.
  std::string LoadValid(const std::string& path) {
    Doc doc;
    json reply =
        Check(hcf_load_pipeline_file(platform_, path.c_str(), doc.out()), doc);
    if (!reply.value("valid", false)) {
      Print({{"v", 1},
             {"error", {{"code", "INVALID_GRAPH"},
                        {"message", "pipeline has violations"},
                        {"detail", {{"violations", reply["violations"]}}}}}});
      throw DomainFailure{};
    }
    return reply["id"].get<std::string>();
  }

 private:
  hcf_platform* platform_ = nullptr;
};

int CmdLoadHam(const std::vector<std::string>& hams, const std::string& file) {
  std::vector<std::string> all = hams;
  all.push_back(file);
  Session session(all);
  Doc doc;
  Print(Check(hcf_list_processors(session.get(), doc.out()), doc));
  return kExitOk;
}

int CmdValidate(const std::string& file) {
  Doc doc;
  json reply = Check(hcf_validate_pipeline_file(file.c_str(), doc.out()), doc);
  std::cout << "valid" << std::endl;
  for (const auto& w : reply["warnings"]) {
    std::cout << "warning: output " << w.get<std::string>()
              << " is not consumed" << std::endl;
  }
  return kExitOk;
}

int CmdPlan(const std::vector<std::string>& hams, const std::string& file,
            bool exhaustive) {
  Session session(hams);
  std::string id = session.LoadValid(file);
  Doc doc;
  Print(Check(hcf_plan(session.get(), id.c_str(),
                       exhaustive ? HCF_PLAN_EXHAUSTIVE : HCF_PLAN_GREEDY,
                       doc.out()),
              doc));
  return kExitOk;
}

int CmdRun(const std::vector<std::string>& hams, const std::string& file,
           bool exhaustive, int timeout_ms) {
  Session session(hams);
  std::string id = session.LoadValid(file);
  Doc start;
  json started = Check(
      hcf_start(session.get(), id.c_str(),
                exhaustive ? HCF_PLAN_EXHAUSTIVE : HCF_PLAN_GREEDY, start.out()),
      start);
  std::string sid = started["session_id"].get<std::string>();
  int finished = 0;
  hcf_wait_session(session.get(), sid.c_str(),
                   static_cast<uint32_t>(timeout_ms), &finished);
  json stats;
  if (!finished) {
    Doc stop;
    stats = Check(hcf_stop(session.get(), sid.c_str(), stop.out()), stop);
  } else {
    Doc status;
    stats = Check(hcf_session_status(session.get(), sid.c_str(), status.out()),
                  status);
  }
  for (const auto& [name, values] : stats["sinks"].items()) {
    std::cout << "sink " << name << ": " << values.dump() << std::endl;
  }
  Print(stats);
  if (stats.value("state", "") == "failed") return kExitDomain;
  if (!finished) {
    std::cerr << "run did not finish within " << timeout_ms
              << " ms; stopped\n";
  }
  return kExitOk;
}

int CmdServe(const std::vector<std::string>& hams,
             const std::vector<std::string>& pipelines,
             const std::string& listen) {
  Session session(hams);
  for (const auto& path : pipelines) {
    Doc doc;
    Check(hcf_load_pipeline_file(session.get(), path.c_str(), doc.out()), doc);
  }
  hcf_server* server = nullptr;
  hcf_status status = hcf_server_start(
      session.get(), listen.empty() ? nullptr : listen.c_str(), &server);
  if (status != HCF_OK) {
    Print({{"v", 1},
           {"error", {{"code", hcf_status_name(status)},
                      {"message", "cannot start server"}}}});
    return kExitDomain;
  }
  std::cout << "listening on port " << hcf_server_port(server) << std::endl;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  while (!g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  hcf_server_destroy(server);
  return kExitOk;
}

int CmdStatus(const std::string& server, const std::string& session_id) {
  const char* listen = server.empty() ? nullptr : server.c_str();
  std::vector<std::string> paths = {"/processors", "/pipelines"};
  if (!session_id.empty()) paths.push_back("/sessions/" + session_id);
  json out = json::object();
  for (const auto& path : paths) {
    int http_status = 0;
    Doc doc;
    hcf_status status = hcf_http_get(listen, path.c_str(), &http_status,
                                     doc.out());
    json reply = Check(status, doc);
    if (http_status != 200) {
      Print(reply);
      return kExitDomain;
    }
    out[path] = reply;
  }
  Print(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcflow: heterogeneous dataflow platform"};
  app.require_subcommand(1);
  app.fallthrough();

  std::vector<std::string> hams;
  app.add_option("--ham", hams, "HAM manifest to load (repeatable)")
      ->allow_extra_args(false)
      ->check(CLI::ExistingFile);

  std::string file;
  bool exhaustive = false;

  auto* load_ham = app.add_subcommand("load-ham", "load a HAM and list processors");
  load_ham->add_option("file", file, "HAM manifest")
      ->required()
      ->check(CLI::ExistingFile);

  auto* validate = app.add_subcommand("validate", "check a pipeline definition");
  validate->add_option("pipeline", file)->required()->check(CLI::ExistingFile);

  auto* plan = app.add_subcommand("plan", "compute a deployment plan");
  plan->add_option("pipeline", file)->required()->check(CLI::ExistingFile);
  plan->add_flag("--exhaustive", exhaustive, "use the backtracking planner");

  int timeout_ms = 60000;
  auto* run = app.add_subcommand("run", "deploy and run a pipeline to completion");
  run->add_option("pipeline", file)->required()->check(CLI::ExistingFile);
  run->add_flag("--exhaustive", exhaustive, "use the backtracking planner");
  run->add_option("--timeout-ms", timeout_ms, "stop the run after this long")
      ->check(CLI::PositiveNumber);

  std::string listen;
  std::vector<std::string> preload;
  auto* serve = app.add_subcommand("serve", "serve the control API over HTTP");
  serve->add_option("--listen", listen,
                    "host:port (default $HCFLOW_LISTEN or 127.0.0.1:8470)");
  serve->add_option("--pipeline", preload, "pipeline to preload (repeatable)")
      ->allow_extra_args(false)
      ->check(CLI::ExistingFile);

  std::string server;
  std::string session_id;
  auto* status = app.add_subcommand("status", "query a running server");
  status->add_option("--server", server,
                     "host:port (default $HCFLOW_LISTEN or 127.0.0.1:8470)");
  status->add_option("--session", session_id, "also show this session");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*load_ham) return CmdLoadHam(hams, file);
    if (*validate) return CmdValidate(file);
    if (*plan) return CmdPlan(hams, file, exhaustive);
    if (*run) return CmdRun(hams, file, exhaustive, timeout_ms);
    if (*serve) return CmdServe(hams, preload, listen);
    if (*status) return CmdStatus(server, session_id);
  } catch (const DomainFailure&) {
    return kExitDomain;
  }
  return kExitUsage;
}
