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

// A run of one pipeline: plan, commit, instantiate runners, wire a bounded
// channel onto every edge and binding, and drive each shell on its own
// thread until the sources are exhausted or the run is stopped.
//
// State machine: created -> running -> stopping -> stopped; any -> failed.
// A run whose sources finish on their own walks running -> stopping ->
// stopped without a Stop call. Handles are undeployed before the final
// state is published, so occupancy is back to its pre-start value by the
// time a caller observes stopped or failed.

#ifndef HCFLOW_RUNTIME_SESSION_H_
#define HCFLOW_RUNTIME_SESSION_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "hcflow/graph/graph.h"
#include "hcflow/matcher/matcher.h"
#include "hcflow/registry/registry.h"
#include "hcflow/runtime/channel.h"
#include "json.hpp"

namespace hcflow {

enum class SessionState { kCreated, kRunning, kStopping, kStopped, kFailed };

std::string_view SessionStateName(SessionState state);

// How long Stop waits for a run to drain before tearing it down.
inline constexpr std::chrono::milliseconds kStopGrace{2000};

struct RunOptions {
  PlanMode mode = PlanMode::kGreedy;
  std::size_t channel_capacity = kDefaultChannelCapacity;
};

struct SessionStats {
  std::string session_id;
  SessionState state = SessionState::kCreated;
  // Keyed by channel name: "a.out->b.in", "source->a.in", "b.out->sink".
  std::map<std::string, std::uint64_t> tokens_per_edge;  // delivered
  std::map<std::string, std::uint64_t> produced_per_edge;
  std::map<std::string, std::uint64_t> processed_per_shell;  // firings
  // "collect:" sinks, keyed by "shell.port" (bindings) or shell id (sink
  // shells hosted on a source-sink processor).
  std::map<std::string, std::vector<Value>> sink_outputs;
  double duration_ms = 0;
  std::string failure;
};

nlohmann::json StatsToJson(const SessionStats& stats);

class RunSession {
 public:
  // Invoked once per state transition, in transition order.
  using StateObserver = std::function<void(const std::string& session_id,
                                           SessionState from, SessionState to)>;

  RunSession(std::string id, DataflowGraph graph, RunOptions options = {},
             StateObserver observer = {});
  ~RunSession();

  RunSession(const RunSession&) = delete;
  RunSession& operator=(const RunSession&) = delete;

  // created -> running. Throws kInvalidState, kInvalidGraph,
  // kPlanInfeasible (report in the detail), kCommitFailed and any runner
  // instantiation error; on a throw the session is failed and nothing is
  // left deployed. `registry` must outlive the session.
  void Start(Registry& registry);

  // Stops the sources, lets in-flight tokens drain, undeploys and returns
  // the final stats. After kStopGrace the remaining tokens are dropped
  // instead. A no-op on an already stopped session. Throws
  // kInvalidState for created or failed sessions.
  SessionStats Stop();

  SessionStats Stats() const;
  SessionState state() const;

  // True once the session is stopped or failed.
  bool WaitForCompletion(std::chrono::milliseconds timeout) const;

  const std::string& id() const { return id_; }
  const DataflowGraph& graph() const { return graph_; }
  const DeploymentPlan& plan() const { return plan_; }
  const std::vector<DeploymentHandle>& handles() const { return handles_; }

 private:
  struct EdgeRuntime;
  struct ShellRuntime;

  void Transition(SessionState to);
  void Fail(const std::string& message);
  void Build(Registry& registry);
  void Launch();
  void RunShell(ShellRuntime& shell);
  void Supervise();
  void ReleaseHandles();

  const std::string id_;
  const DataflowGraph graph_;
  const RunOptions options_;
  StateObserver observer_;

  Registry* registry_ = nullptr;
  DeploymentPlan plan_;
  std::vector<DeploymentHandle> handles_;

  std::vector<std::unique_ptr<EdgeRuntime>> edges_;
  std::vector<std::unique_ptr<ShellRuntime>> shells_;
  std::map<std::string, std::shared_ptr<CollectBuffer>> collected_;

  std::atomic<bool> stop_requested_{false};
  std::atomic<bool> failed_{false};
  std::atomic<bool> torn_down_{false};

  mutable std::mutex mu_;
  mutable std::condition_variable done_cv_;
  SessionState state_ = SessionState::kCreated;
  std::string failure_;
  std::chrono::steady_clock::time_point started_at_;
  double duration_ms_ = 0;

  std::vector<std::thread> workers_;
  std::thread supervisor_;
};

// Creates and starts a session in one step.
std::unique_ptr<RunSession> StartRun(std::string id, DataflowGraph graph,
                                     Registry& registry, RunOptions options = {},
                                     RunSession::StateObserver observer = {});

}  // namespace hcflow

#endif  // HCFLOW_RUNTIME_SESSION_H_
