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

// The administrative surface: one object that owns the registry, the loaded
// pipelines, the run sessions and the event log. Every method maps onto a
// single engine operation and answers with a JSON document stamped "v": 1.
// Failures are thrown as hcflow::Error; ErrorToJson gives their wire form.

#ifndef HCFLOW_CONTROL_PLATFORM_H_
#define HCFLOW_CONTROL_PLATFORM_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "hcflow/error.h"
#include "hcflow/graph/pipeline_io.h"
#include "hcflow/matcher/matcher.h"
#include "hcflow/registry/registry.h"
#include "hcflow/runtime/session.h"
#include "json.hpp"

namespace hcflow {

// {"v": 1, "error": {"code": "NOT_FOUND", "message": ..., "detail": ...}}
nlohmann::json ErrorToJson(const Error& error);

struct Event {
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;  // since the Unix epoch
  std::string kind;
  nlohmann::json data;
};

nlohmann::json EventToJson(const Event& event);

// Ring buffer of state-change events with monotonically increasing seq.
class EventLog {
 public:
  explicit EventLog(std::size_t capacity = 4096) : capacity_(capacity) {}

  std::uint64_t Append(std::string kind, nlohmann::json data);

  // Events with seq > `after`, oldest first.
  std::vector<Event> Since(std::uint64_t after) const;

  // Blocks until an event newer than `after` exists or the timeout expires.
  bool WaitNewer(std::uint64_t after, std::chrono::milliseconds timeout) const;

  std::uint64_t last_seq() const;

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::deque<Event> events_;
  std::uint64_t last_seq_ = 0;
};

class Platform {
 public:
  explicit Platform(RunOptions defaults = {});
  ~Platform();

  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  nlohmann::json LoadHam(const nlohmann::json& manifest);
  nlohmann::json ListProcessors() const;

  // Pipelines are kept even when they fail validation so operators can see
  // the violations; they just cannot be planned or started.
  nlohmann::json LoadPipeline(const nlohmann::json& definition);
  nlohmann::json ListPipelines() const;

  // Throws kNotFound, kInvalidGraph, kPlanInfeasible (plan in the detail).
  nlohmann::json Plan(std::string_view pipeline_id, PlanMode mode) const;

  // Throws kNotFound plus everything RunSession::Start throws. A session
  // whose start fails stays listed in the failed state.
  nlohmann::json Start(std::string_view pipeline_id, PlanMode mode);
  nlohmann::json Stop(std::string_view session_id);
  nlohmann::json Status(std::string_view session_id) const;
  nlohmann::json Events(std::uint64_t after) const;

  // True once the session is stopped or failed. Throws kNotFound.
  bool WaitForSession(std::string_view session_id,
                      std::chrono::milliseconds timeout) const;

  Registry& registry() { return registry_; }
  const Registry& registry() const { return registry_; }
  const EventLog& events() const { return events_; }

 private:
  struct SessionEntry {
    std::string pipeline_id;
    std::shared_ptr<RunSession> session;
  };

  std::shared_ptr<RunSession> FindSession(std::string_view id,
                                          std::string* pipeline_id) const;

  const RunOptions defaults_;
  Registry registry_;
  EventLog events_;

  mutable std::mutex mu_;
  std::map<std::string, PipelineDefinition, std::less<>> pipelines_;
  std::vector<std::string> pipeline_order_;
  std::uint64_t next_pipeline_ = 1;
  std::uint64_t next_session_ = 1;
  // Declared last so sessions are torn down while the registry and the
  // event log they report to are still alive.
  std::map<std::string, SessionEntry, std::less<>> sessions_;
};

}  // namespace hcflow

#endif  // HCFLOW_CONTROL_PLATFORM_H_
