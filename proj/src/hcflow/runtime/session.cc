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

#include "hcflow/runtime/session.h"

#include <algorithm>
#include <exception>

#include "hcflow/error.h"
#include "hcflow/json_io.h"

namespace hcflow {

struct RunSession::EdgeRuntime {
  EdgeRuntime(std::string n, std::size_t capacity)
      : name(std::move(n)), channel(capacity) {}

  std::string name;
  Channel<Token> channel;
  std::uint64_t next_seq = 0;      // producer side only
  std::uint64_t expected_seq = 0;  // consumer side only
};

// One concurrently executing task: a deployed shell, or the producer or
// consumer behind an external binding.
struct RunSession::ShellRuntime {
  std::string name;
  bool is_shell = true;  // external bindings are not counted as shells
  std::unique_ptr<Runner> runner;
  std::vector<EdgeRuntime*> inputs;
  std::vector<std::vector<EdgeRuntime*>> outputs;
  std::atomic<std::uint64_t> processed{0};
};

namespace {

using nlohmann::json;

bool LegalTransition(SessionState from, SessionState to) {
  if (to == SessionState::kFailed) return from != SessionState::kFailed &&
                                          from != SessionState::kStopped;
  switch (from) {
    case SessionState::kCreated: return to == SessionState::kRunning;
    case SessionState::kRunning: return to == SessionState::kStopping;
    case SessionState::kStopping: return to == SessionState::kStopped;
    default: return false;
  }
}

std::size_t PortIndex(const std::vector<PortSpec>& ports, std::string_view name) {
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (ports[i].name == name) return i;
  }
  throw Error(ErrorCode::kUnknownPort, "unknown port \"" + std::string(name) + "\"");
}

RunnerShape ShapeOf(const AlgorithmShell& shell) {
  RunnerShape shape;
  for (const auto& p : shell.inputs) shape.input_types.push_back(p.datatype);
  for (const auto& p : shell.outputs) shape.output_types.push_back(p.datatype);
  return shape;
}

}  // namespace

std::string_view SessionStateName(SessionState state) {
  switch (state) {
    case SessionState::kCreated: return "created";
    case SessionState::kRunning: return "running";
    case SessionState::kStopping: return "stopping";
    case SessionState::kStopped: return "stopped";
    case SessionState::kFailed: return "failed";
  }
  return "unknown";
}

json StatsToJson(const SessionStats& stats) {
  json sinks = json::object();
  for (const auto& [name, values] : stats.sink_outputs) {
    json list = json::array();
    for (const auto& v : values) list.push_back(ValueToJson(v));
    sinks[name] = std::move(list);
  }
  json doc = {{"v", kSchemaVersion},
              {"session_id", stats.session_id},
              {"state", SessionStateName(stats.state)},
              {"tokens_per_edge", stats.tokens_per_edge},
              {"produced_per_edge", stats.produced_per_edge},
              {"processed_per_shell", stats.processed_per_shell},
              {"sinks", std::move(sinks)},
              {"duration_ms", stats.duration_ms}};
  if (!stats.failure.empty()) doc["failure"] = stats.failure;
  return doc;
}

RunSession::RunSession(std::string id, DataflowGraph graph, RunOptions options,
                       StateObserver observer)
    : id_(std::move(id)),
      graph_(std::move(graph)),
      options_(options),
      observer_(std::move(observer)) {
  if (options_.channel_capacity == 0) {
    throw Error(ErrorCode::kInvalidArgument, "channel capacity must be > 0");
  }
}

RunSession::~RunSession() {
  stop_requested_ = true;
  if (supervisor_.joinable()) supervisor_.join();
}

void RunSession::Transition(SessionState to) {
  // Caller holds mu_.
  if (!LegalTransition(state_, to)) {
    throw Error(ErrorCode::kInvalidState,
                "session " + id_ + ": illegal transition " +
                    std::string(SessionStateName(state_)) + " -> " +
                    std::string(SessionStateName(to)));
  }
  SessionState from = state_;
  state_ = to;
  if (observer_) observer_(id_, from, to);
}

void RunSession::Fail(const std::string& message) {
  {
    std::lock_guard lock(mu_);
    if (failure_.empty()) failure_ = message;
  }
  failed_ = true;
  for (auto& e : edges_) e->channel.Cancel();
}

void RunSession::Start(Registry& registry) {
  {
    std::lock_guard lock(mu_);
    if (state_ != SessionState::kCreated) {
      throw Error(ErrorCode::kInvalidState,
                  "session " + id_ + " is " +
                      std::string(SessionStateName(state_)));
    }
  }
  registry_ = &registry;
  std::exception_ptr error;
  try {
    plan_ = PlanGraph(graph_, registry.Snapshot(), options_.mode);
    if (!plan_.complete) {
      throw Error(ErrorCode::kPlanInfeasible,
                  "no " + std::string(PlanModeName(options_.mode)) +
                      " placement for pipeline",
                  ReportToJson(plan_.report));
    }
    handles_ = CommitPlan(plan_, graph_, registry);
    Build(registry);
  } catch (const Error& e) {
    error = std::current_exception();
    std::lock_guard lock(mu_);
    shells_.clear();
    edges_.clear();
    collected_.clear();
    ReleaseHandles();
    failure_ = e.message();
    Transition(SessionState::kFailed);
  }
  if (error) {
    done_cv_.notify_all();
    std::rethrow_exception(error);
  }
  {
    std::lock_guard lock(mu_);
    started_at_ = std::chrono::steady_clock::now();
    Transition(SessionState::kRunning);
  }
  Launch();
}

void RunSession::Build(Registry& registry) {
  std::map<std::string, const DeploymentHandle*> by_impl;
  for (const auto& h : handles_) by_impl[h.implementation_id] = &h;

  std::map<std::string, ShellRuntime*, std::less<>> by_shell;
  for (const auto& [shell_id, assignment] : plan_.assignments) {
    const AlgorithmShell& shell = graph_.shell(shell_id);
    auto rt = std::make_unique<ShellRuntime>();
    rt->name = shell_id;
    std::shared_ptr<CollectBuffer> collect;
    if (shell.outputs.empty()) {
      collect = std::make_shared<CollectBuffer>();
    }
    rt->runner = registry.InstantiateRunner(
        *by_impl.at(assignment.implementation_id), ShapeOf(shell), collect);
    if (shell.inputs.empty() && rt->runner->role() != RunnerRole::kSource) {
      throw Error(ErrorCode::kInvalidGraph,
                  "shell \"" + shell_id +
                      "\" has no inputs but its implementation is not a source");
    }
    if (collect && rt->runner->role() == RunnerRole::kSink) {
      collected_[shell_id] = collect;
    }
    rt->inputs.resize(shell.inputs.size(), nullptr);
    rt->outputs.resize(shell.outputs.size());
    by_shell[shell_id] = rt.get();
    shells_.push_back(std::move(rt));
  }

  auto new_edge = [&](std::string name) {
    edges_.push_back(
        std::make_unique<EdgeRuntime>(std::move(name), options_.channel_capacity));
    return edges_.back().get();
  };

  for (const auto& e : graph_.edges()) {
    EdgeRuntime* edge = new_edge(e.from.ToString() + "->" + e.to.ToString());
    ShellRuntime* producer = by_shell.at(e.from.shell);
    ShellRuntime* consumer = by_shell.at(e.to.shell);
    producer->outputs[PortIndex(graph_.shell(e.from.shell).outputs, e.from.port)]
        .push_back(edge);
    consumer->inputs[PortIndex(graph_.shell(e.to.shell).inputs, e.to.port)] = edge;
  }

  for (const auto& b : graph_.sources()) {
    const AlgorithmShell& shell = graph_.shell(b.port.shell);
    std::size_t idx = PortIndex(shell.inputs, b.port.port);
    EdgeRuntime* edge = new_edge("source->" + b.port.ToString());
    auto rt = std::make_unique<ShellRuntime>();
    rt->name = edge->name;
    rt->is_shell = false;
    rt->runner = MakeSourceRunner(OpenSource(b.resource, shell.inputs[idx].datatype));
    rt->outputs.push_back({edge});
    by_shell.at(b.port.shell)->inputs[idx] = edge;
    shells_.push_back(std::move(rt));
  }

  for (const auto& b : graph_.sinks()) {
    const AlgorithmShell& shell = graph_.shell(b.port.shell);
    std::size_t idx = PortIndex(shell.outputs, b.port.port);
    EdgeRuntime* edge = new_edge(b.port.ToString() + "->sink");
    std::shared_ptr<CollectBuffer> collect;
    if (IsCollectResource(b.resource)) {
      collect = std::make_shared<CollectBuffer>();
      collected_[b.port.ToString()] = collect;
    }
    auto rt = std::make_unique<ShellRuntime>();
    rt->name = edge->name;
    rt->is_shell = false;
    rt->runner = MakeSinkRunner(OpenSink(b.resource, collect));
    rt->inputs.push_back(edge);
    by_shell.at(b.port.shell)->outputs[idx].push_back(edge);
    shells_.push_back(std::move(rt));
  }
}

void RunSession::Launch() {
  workers_.reserve(shells_.size());
  for (auto& s : shells_) {
    workers_.emplace_back([this, rt = s.get()] { RunShell(*rt); });
  }
  supervisor_ = std::thread([this] { Supervise(); });
}

void RunSession::RunShell(ShellRuntime& s) {
  auto emit = [&](const std::vector<Value>& values) {
    if (values.size() != s.outputs.size()) {
      throw Error(ErrorCode::kInternal,
                  s.name + ": runner produced " + std::to_string(values.size()) +
                      " values for " + std::to_string(s.outputs.size()) +
                      " outputs");
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      for (EdgeRuntime* e : s.outputs[j]) {
        e->channel.Put(Token{values[j], e->next_seq++});
      }
    }
  };

  auto close_outputs = [&] {
    for (auto& port : s.outputs) {
      for (EdgeRuntime* e : port) e->channel.Close();
    }
  };

  try {
    if (s.inputs.empty()) {
      while (!stop_requested_ && !failed_) {
        auto out = s.runner->Fire({});
        if (!out) break;
        emit(*out);
        ++s.processed;
      }
    } else {
      std::vector<Value> in(s.inputs.size());
      bool open = true;
      while (open) {
        for (std::size_t i = 0; i < s.inputs.size() && open; ++i) {
          EdgeRuntime* e = s.inputs[i];
          auto token = e->channel.Get();
          if (!token) {
            open = false;
          } else if (token->seq != e->expected_seq++) {
            throw Error(ErrorCode::kInternal,
                        "sequence gap on " + e->name + ": got " +
                            std::to_string(token->seq));
          } else {
            in[i] = std::move(token->payload);
          }
        }
        if (!open) break;
        auto out = s.runner->Fire(in);
        if (out) emit(*out);
        ++s.processed;
      }
      // Once one input ends no further firing is possible. Reading the
      // other inputs to completion could block a producer that feeds two of
      // them, so they switch to discarding instead.
      for (EdgeRuntime* e : s.inputs) e->channel.Discard();
    }
  } catch (const std::exception& e) {
    if (!torn_down_) Fail(s.name + ": " + e.what());
  }
  close_outputs();
  // Sinks flush and close their resource on destruction.
  s.runner.reset();
}

void RunSession::Supervise() {
  for (auto& w : workers_) w.join();
  ReleaseHandles();
  {
    std::lock_guard lock(mu_);
    duration_ms_ = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started_at_)
                       .count();
    if (failed_) {
      Transition(SessionState::kFailed);
    } else {
      if (state_ == SessionState::kRunning) Transition(SessionState::kStopping);
      Transition(SessionState::kStopped);
    }
  }
  done_cv_.notify_all();
}

void RunSession::ReleaseHandles() {
  if (!registry_) return;
  for (auto it = handles_.rbegin(); it != handles_.rend(); ++it) {
    if (registry_->IsLive(*it)) registry_->Undeploy(*it);
  }
}

SessionStats RunSession::Stop() {
  {
    std::unique_lock lock(mu_);
    switch (state_) {
      case SessionState::kCreated:
      case SessionState::kFailed:
        throw Error(ErrorCode::kInvalidState,
                    "session " + id_ + " is " +
                        std::string(SessionStateName(state_)));
      case SessionState::kRunning:
        Transition(SessionState::kStopping);
        break;
      default:
        break;
    }
    stop_requested_ = true;
    auto finished = [&] {
      return state_ == SessionState::kStopped ||
             state_ == SessionState::kFailed;
    };
    // Sources stop at their next token and the graph drains. A run that
    // does not drain in time is torn down and its buffered tokens dropped.
    if (!done_cv_.wait_for(lock, kStopGrace, finished)) {
      torn_down_ = true;
      for (auto& e : edges_) e->channel.Cancel();
      done_cv_.wait(lock, finished);
    }
  }
  return Stats();
}

SessionStats RunSession::Stats() const {
  SessionStats stats;
  stats.session_id = id_;
  std::lock_guard lock(mu_);
  stats.state = state_;
  stats.failure = failure_;
  if (state_ == SessionState::kRunning || state_ == SessionState::kStopping) {
    stats.duration_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started_at_)
                            .count();
  } else {
    stats.duration_ms = duration_ms_;
  }
  // The runtime tables are still being assembled while created.
  if (state_ == SessionState::kCreated) return stats;
  for (const auto& e : edges_) {
    stats.tokens_per_edge[e->name] = e->channel.get_count();
    stats.produced_per_edge[e->name] = e->channel.put_count();
  }
  for (const auto& s : shells_) {
    if (s->is_shell) stats.processed_per_shell[s->name] = s->processed.load();
  }
  for (const auto& [name, buffer] : collected_) {
    stats.sink_outputs[name] = buffer->Snapshot();
  }
  return stats;
}

SessionState RunSession::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

bool RunSession::WaitForCompletion(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return done_cv_.wait_for(lock, timeout, [&] {
    return state_ == SessionState::kStopped || state_ == SessionState::kFailed;
  });
}

std::unique_ptr<RunSession> StartRun(std::string id, DataflowGraph graph,
                                     Registry& registry, RunOptions options,
                                     RunSession::StateObserver observer) {
  auto session = std::make_unique<RunSession>(std::move(id), std::move(graph),
                                              options, std::move(observer));
  session->Start(registry);
  return session;
}

}  // namespace hcflow
