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

#include "hcflow/control/platform.h"

#include "hcflow/json_io.h"

namespace hcflow {
namespace {

using nlohmann::json;

std::int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json ViolationsToJson(const std::vector<Violation>& violations) {
  json out = json::array();
  for (const auto& v : violations) {
    out.push_back({{"kind", ViolationKindName(v.kind)},
                   {"shell", v.shell},
                   {"port", v.port},
                   {"message", v.message}});
  }
  return out;
}

}  // namespace

json ErrorToJson(const Error& error) {
  json body = {{"code", ErrorCodeName(error.code())},
               {"message", error.message()}};
  if (!error.detail().is_null()) body["detail"] = error.detail();
  return {{"v", kSchemaVersion}, {"error", std::move(body)}};
}

json EventToJson(const Event& event) {
  return {{"seq", event.seq},
          {"timestamp_ms", event.timestamp_ms},
          {"kind", event.kind},
          {"data", event.data}};
}

std::uint64_t EventLog::Append(std::string kind, json data) {
  std::uint64_t seq;
  {
    std::lock_guard lock(mu_);
    seq = ++last_seq_;
    events_.push_back(Event{seq, NowMs(), std::move(kind), std::move(data)});
    while (events_.size() > capacity_) events_.pop_front();
  }
  cv_.notify_all();
  return seq;
}

std::vector<Event> EventLog::Since(std::uint64_t after) const {
  std::lock_guard lock(mu_);
  std::vector<Event> out;
  for (const auto& e : events_) {
    if (e.seq > after) out.push_back(e);
  }
  return out;
}

bool EventLog::WaitNewer(std::uint64_t after,
                         std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return last_seq_ > after; });
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mu_);
  return last_seq_;
}

Platform::Platform(RunOptions defaults) : defaults_(defaults) {}

Platform::~Platform() {
  // Stop sessions before members start going away.
  std::lock_guard lock(mu_);
  sessions_.clear();
}

json Platform::LoadHam(const json& manifest) {
  HamManifest ham = ParseHamManifest(manifest);
  registry_.LoadHam(ham);
  json ids = json::array();
  for (const auto& p : ham.processors) ids.push_back(p.id);
  events_.Append("ham_loaded", {{"ham_id", ham.ham_id}, {"processors", ids}});
  return {{"v", kSchemaVersion}, {"ham_id", ham.ham_id}, {"processors", ids}};
}

json Platform::ListProcessors() const {
  json list = json::array();
  for (const auto& p : registry_.Snapshot().processors) {
    list.push_back(ProcessorToJson(p));
  }
  return {{"v", kSchemaVersion}, {"processors", std::move(list)}};
}

json Platform::LoadPipeline(const json& definition) {
  PipelineDefinition def = ParsePipeline(definition);
  auto violations = ValidateGraph(def.graph);
  auto warnings = UnconsumedOutputs(def.graph);
  std::string id;
  {
    std::lock_guard lock(mu_);
    if (def.id.empty()) {
      do {
        def.id = "pipeline-" + std::to_string(next_pipeline_++);
      } while (pipelines_.count(def.id));
    } else if (pipelines_.count(def.id)) {
      throw Error(ErrorCode::kDuplicateId,
                  "pipeline \"" + def.id + "\" already loaded");
    }
    id = def.id;
    pipeline_order_.push_back(id);
    pipelines_.emplace(id, std::move(def));
  }
  events_.Append("pipeline_loaded",
                 {{"pipeline_id", id}, {"valid", violations.empty()}});
  return {{"v", kSchemaVersion},
          {"id", id},
          {"valid", violations.empty()},
          {"violations", ViolationsToJson(violations)},
          {"warnings", warnings}};
}

json Platform::ListPipelines() const {
  std::lock_guard lock(mu_);
  json list = json::array();
  for (const auto& id : pipeline_order_) {
    const auto& def = pipelines_.at(id);
    auto violations = ValidateGraph(def.graph);
    list.push_back({{"id", id},
                    {"shells", def.graph.shells().size()},
                    {"valid", violations.empty()},
                    {"violations", ViolationsToJson(violations)},
                    {"warnings", UnconsumedOutputs(def.graph)}});
  }
  return {{"v", kSchemaVersion}, {"pipelines", std::move(list)}};
}

json Platform::Plan(std::string_view pipeline_id, PlanMode mode) const {
  DataflowGraph graph;
  {
    std::lock_guard lock(mu_);
    auto it = pipelines_.find(pipeline_id);
    if (it == pipelines_.end()) {
      throw Error(ErrorCode::kNotFound,
                  "no pipeline \"" + std::string(pipeline_id) + "\"");
    }
    graph = it->second.graph;
  }
  DeploymentPlan plan = PlanGraph(graph, registry_.Snapshot(), mode);
  json doc = PlanToJson(plan);
  doc["pipeline_id"] = std::string(pipeline_id);
  if (!plan.complete) {
    throw Error(ErrorCode::kPlanInfeasible,
                "no " + std::string(PlanModeName(mode)) +
                    " placement for pipeline \"" + std::string(pipeline_id) +
                    "\"",
                doc);
  }
  return doc;
}

json Platform::Start(std::string_view pipeline_id, PlanMode mode) {
  std::shared_ptr<RunSession> session;
  {
    std::lock_guard lock(mu_);
    auto it = pipelines_.find(pipeline_id);
    if (it == pipelines_.end()) {
      throw Error(ErrorCode::kNotFound,
                  "no pipeline \"" + std::string(pipeline_id) + "\"");
    }
    RunOptions options = defaults_;
    options.mode = mode;
    std::string id = "s" + std::to_string(next_session_++);
    std::string pid(pipeline_id);
    auto observer = [this, pid](const std::string& sid, SessionState from,
                                SessionState to) {
      events_.Append("session_state", {{"session_id", sid},
                                       {"pipeline_id", pid},
                                       {"from", SessionStateName(from)},
                                       {"to", SessionStateName(to)}});
    };
    session = std::make_shared<RunSession>(id, it->second.graph, options,
                                           std::move(observer));
    sessions_.emplace(id, SessionEntry{pid, session});
  }
  session->Start(registry_);
  return {{"v", kSchemaVersion},
          {"session_id", session->id()},
          {"pipeline_id", std::string(pipeline_id)},
          {"plan", PlanToJson(session->plan())}};
}

std::shared_ptr<RunSession> Platform::FindSession(
    std::string_view id, std::string* pipeline_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "no session \"" + std::string(id) + "\"");
  }
  if (pipeline_id) *pipeline_id = it->second.pipeline_id;
  return it->second.session;
}

json Platform::Stop(std::string_view session_id) {
  std::string pipeline_id;
  auto session = FindSession(session_id, &pipeline_id);
  json doc = StatsToJson(session->Stop());
  doc["pipeline_id"] = pipeline_id;
  return doc;
}

json Platform::Status(std::string_view session_id) const {
  std::string pipeline_id;
  auto session = FindSession(session_id, &pipeline_id);
  json doc = StatsToJson(session->Stats());
  doc["pipeline_id"] = pipeline_id;
  if (session->state() != SessionState::kCreated) {
    doc["plan"] = PlanToJson(session->plan());
  }
  return doc;
}

json Platform::Events(std::uint64_t after) const {
  json list = json::array();
  for (const auto& e : events_.Since(after)) list.push_back(EventToJson(e));
  return {{"v", kSchemaVersion},
          {"events", std::move(list)},
          {"last_seq", events_.last_seq()}};
}

bool Platform::WaitForSession(std::string_view session_id,
                              std::chrono::milliseconds timeout) const {
  return FindSession(session_id, nullptr)->WaitForCompletion(timeout);
}

}  // namespace hcflow
