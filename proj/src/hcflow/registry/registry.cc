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

#include "hcflow/registry/registry.h"

#include <algorithm>
#include <chrono>
#include <thread>

#include "hcflow/error.h"
#include "hcflow/json_io.h"

namespace hcflow {
namespace {

using nlohmann::json;

std::string Quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

ResourceMap ParseCapacity(const json& doc) {
  ResourceMap out;
  auto it = doc.find("capacity");
  if (it == doc.end()) return out;
  if (!it->is_object()) {
    throw Error(ErrorCode::kParseError, "processor: capacity must be an object");
  }
  for (const auto& [name, units] : it->items()) {
    if (!IsValidToken(name) || !units.is_number_integer() ||
        units.get<std::int64_t>() < 0) {
      throw Error(ErrorCode::kParseError,
                  "processor: bad capacity entry " + Quote(name));
    }
    out.emplace(name, units.get<std::int64_t>());
  }
  return out;
}

json ResourceMapToJson(const ResourceMap& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = v;
  return out;
}

}  // namespace

std::string_view BackendKindName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kHostExecutor: return "host-executor";
    case BackendKind::kSimulatedFpga: return "simulated-fpga";
    case BackendKind::kSourceSink: return "source-sink";
  }
  return "unknown";
}

BackendKind ParseBackendKind(std::string_view name) {
  for (auto k : {BackendKind::kHostExecutor, BackendKind::kSimulatedFpga,
                 BackendKind::kSourceSink}) {
    if (BackendKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kUnknownBackendKind,
              "unknown backend kind " + Quote(name));
}

HamManifest ParseHamManifest(const json& doc) {
  CheckSchemaVersion(doc, "HAM manifest");
  HamManifest m;
  m.ham_id = RequireString(doc, "ham_id", "HAM manifest");
  if (!IsValidToken(m.ham_id)) {
    throw Error(ErrorCode::kParseError, "HAM manifest: bad ham_id");
  }
  if (doc.contains("name")) m.name = RequireString(doc, "name", "HAM manifest");
  const json& procs = RequireField(doc, "processors", "HAM manifest");
  if (!procs.is_array()) {
    throw Error(ErrorCode::kParseError,
                "HAM manifest: processors must be an array");
  }
  for (const auto& p : procs) {
    std::string id = RequireString(p, "id", "processor");
    if (!IsValidToken(id)) {
      throw Error(ErrorCode::kParseError, "processor: bad id " + Quote(id));
    }
    std::string tag_text = RequireString(p, "accept_tag", "processor");
    std::optional<Tag> tag;
    try {
      tag = Tag::Parse(tag_text);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadTag,
                  "processor " + Quote(id) + ": " + e.message(),
                  {{"cause", ErrorCodeName(e.code())}, {"tag", tag_text}});
    }
    BackendKind kind =
        ParseBackendKind(RequireString(p, "backend_kind", "processor"));
    json params = json::object();
    if (auto it = p.find("backend_params"); it != p.end()) {
      if (!it->is_object()) {
        throw Error(ErrorCode::kParseError,
                    "processor: backend_params must be an object");
      }
      params = *it;
    }
    m.processors.push_back(ProcessorSpec{std::move(id), *tag, ParseCapacity(p),
                                         kind, std::move(params)});
  }
  return m;
}

const ProcessorSnapshot* RegistrySnapshot::Find(std::string_view id) const {
  for (const auto& p : processors) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::set<std::string> RegistrySnapshot::Compatible(const Tag& tag) const {
  if (index) return index->Candidates(tag);
  std::set<std::string> out;
  for (const auto& p : processors) {
    if (IsAncestorOrEqual(p.accept_tag, tag)) out.insert(p.id);
  }
  return out;
}

bool FitsCapacity(const ResourceMap& capacity, const ResourceMap& occupancy,
                  const ResourceMap& demand) {
  for (const auto& [resource, units] : demand) {
    if (units == 0) continue;
    auto cap = capacity.find(resource);
    auto occ = occupancy.find(resource);
    std::int64_t total = cap == capacity.end() ? 0 : cap->second;
    std::int64_t used = occ == occupancy.end() ? 0 : occ->second;
    if (units > total - used) return false;
  }
  return true;
}

bool CanDeploy(const ProcessorSnapshot& processor,
               const AlgorithmImplementation& implementation) {
  return IsAncestorOrEqual(processor.accept_tag, implementation.compat_tag) &&
         FitsCapacity(processor.capacity, processor.occupancy,
                      implementation.demand);
}

json ProcessorToJson(const ProcessorSnapshot& p) {
  return {{"id", p.id},
          {"ham_id", p.ham_id},
          {"accept_tag", p.accept_tag.ToString()},
          {"capacity", ResourceMapToJson(p.capacity)},
          {"occupancy", ResourceMapToJson(p.occupancy)},
          {"backend_kind", BackendKindName(p.backend_kind)},
          {"reconfigurations", p.reconfigurations},
          {"live_deployments", p.live_deployments}};
}

Registry::ProcessorState& Registry::FindLocked(std::string_view id) {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error(ErrorCode::kUnknownProcessor, "unknown processor " + Quote(id));
  }
  return processors_[it->second];
}

const Registry::ProcessorState& Registry::FindLocked(std::string_view id) const {
  return const_cast<Registry*>(this)->FindLocked(id);
}

void Registry::LoadHam(const HamManifest& manifest) {
  std::lock_guard lock(mu_);
  std::set<std::string_view> incoming;
  for (const auto& p : manifest.processors) {
    if (by_id_.count(p.id) || !incoming.insert(p.id).second) {
      throw Error(ErrorCode::kDuplicateProcessorId,
                  "processor id " + Quote(p.id) + " already registered");
    }
  }
  auto index = std::make_shared<TagIndex>();
  for (const auto& p : processors_) index->Insert(p.info.accept_tag, p.info.id);
  for (const auto& p : manifest.processors) index->Insert(p.accept_tag, p.id);

  for (const auto& p : manifest.processors) {
    ProcessorState state{
        .info = ProcessorSnapshot{.id = p.id,
                                  .ham_id = manifest.ham_id,
                                  .accept_tag = p.accept_tag,
                                  .capacity = p.capacity,
                                  .occupancy = {},
                                  .backend_kind = p.backend_kind},
        .backend_params = p.backend_params,
    };
    for (const auto& [resource, units] : p.capacity) {
      state.info.occupancy.emplace(resource, 0);
    }
    by_id_.emplace(p.id, processors_.size());
    processors_.push_back(std::move(state));
  }
  index_ = std::move(index);
}

bool Registry::CanDeploy(std::string_view processor_id,
                         const AlgorithmImplementation& implementation) const {
  std::lock_guard lock(mu_);
  return hcflow::CanDeploy(FindLocked(processor_id).info, implementation);
}

DeploymentHandle Registry::Deploy(
    std::string_view processor_id,
    const AlgorithmImplementation& implementation) {
  std::lock_guard lock(mu_);
  ProcessorState& p = FindLocked(processor_id);
  if (!IsAncestorOrEqual(p.info.accept_tag, implementation.compat_tag)) {
    throw Error(ErrorCode::kNotDeployable,
                Quote(implementation.id) + " (" +
                    implementation.compat_tag.ToString() +
                    ") is incompatible with " + Quote(processor_id) + " (" +
                    p.info.accept_tag.ToString() + ")");
  }
  if (!FitsCapacity(p.info.capacity, p.info.occupancy, implementation.demand)) {
    throw Error(ErrorCode::kNotDeployable,
                Quote(processor_id) + " lacks capacity for " +
                    Quote(implementation.id));
  }
  DeploymentHandle handle{
      .handle_id = "h" + std::to_string(next_handle_++),
      .processor_id = p.info.id,
      .implementation_id = implementation.id,
      .demand = {},
  };
  for (const auto& [resource, units] : implementation.demand) {
    if (units == 0) continue;
    p.info.occupancy[resource] += units;
    handle.demand.emplace(resource, units);
  }
  ++p.info.live_deployments;
  if (p.info.backend_kind == BackendKind::kSimulatedFpga) {
    ++p.info.reconfigurations;
  }
  live_.emplace(handle.handle_id,
                LiveDeployment{handle, implementation.payload});
  return handle;
}

void Registry::Undeploy(const DeploymentHandle& handle) {
  std::lock_guard lock(mu_);
  auto it = live_.find(handle.handle_id);
  if (it == live_.end() || !(it->second.handle == handle)) {
    throw Error(ErrorCode::kStaleHandle,
                "handle " + Quote(handle.handle_id) + " is not live");
  }
  ProcessorState& p = FindLocked(handle.processor_id);
  for (const auto& [resource, units] : it->second.handle.demand) {
    p.info.occupancy[resource] -= units;
  }
  --p.info.live_deployments;
  live_.erase(it);
}

std::unique_ptr<Runner> Registry::InstantiateRunner(
    const DeploymentHandle& handle, const RunnerShape& shape,
    std::shared_ptr<CollectBuffer> collect) const {
  Payload payload;
  BackendKind kind;
  json params;
  {
    std::lock_guard lock(mu_);
    auto it = live_.find(handle.handle_id);
    if (it == live_.end() || !(it->second.handle == handle)) {
      throw Error(ErrorCode::kStaleHandle,
                  "handle " + Quote(handle.handle_id) + " is not live");
    }
    payload = it->second.payload;
    const ProcessorState& p = FindLocked(handle.processor_id);
    kind = p.info.backend_kind;
    params = p.backend_params;
  }

  switch (kind) {
    case BackendKind::kHostExecutor:
      if (payload.kind != Payload::Kind::kOperator) {
        throw Error(ErrorCode::kInvalidArgument,
                    "host executor runs built-in operators only (" +
                        Quote(handle.implementation_id) + ")");
      }
      return MakeOperatorRunner(payload.op, payload.params, shape);

    case BackendKind::kSimulatedFpga: {
      if (payload.kind != Payload::Kind::kOperator &&
          payload.kind != Payload::Kind::kConfigBlob) {
        throw Error(ErrorCode::kInvalidArgument,
                    "simulated FPGA cannot host " +
                        Quote(handle.implementation_id));
      }
      auto runner = MakeOperatorRunner(payload.op, payload.params, shape);
      // Loading the configuration image.
      std::int64_t delay_ms = params.value("reconfig_delay_ms", 0);
      if (delay_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      }
      return runner;
    }

    case BackendKind::kSourceSink:
      if (payload.kind == Payload::Kind::kSource &&
          shape.input_types.empty() && shape.output_types.size() == 1) {
        return MakeSourceRunner(
            OpenSource(payload.resource, shape.output_types[0]));
      }
      if (payload.kind == Payload::Kind::kSink && shape.output_types.empty() &&
          !shape.input_types.empty()) {
        return MakeSinkRunner(OpenSink(payload.resource, std::move(collect)));
      }
      throw Error(ErrorCode::kInvalidArgument,
                  "source-sink processor cannot host " +
                      Quote(handle.implementation_id) +
                      " (needs a source payload with one output or a sink "
                      "payload with no outputs)");
  }
  throw Error(ErrorCode::kInternal, "unhandled backend kind");
}

RegistrySnapshot Registry::Snapshot() const {
  std::lock_guard lock(mu_);
  RegistrySnapshot snap;
  snap.processors.reserve(processors_.size());
  for (const auto& p : processors_) snap.processors.push_back(p.info);
  snap.index = index_;
  return snap;
}

ResourceMap Registry::Occupancy(std::string_view processor_id) const {
  std::lock_guard lock(mu_);
  return FindLocked(processor_id).info.occupancy;
}

std::vector<std::string> Registry::CompatibleProcessors(const Tag& tag) const {
  std::lock_guard lock(mu_);
  auto ids = index_->Candidates(tag);
  std::vector<std::string> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end(),
            [this](const std::string& a, const std::string& b) {
              return by_id_.find(a)->second < by_id_.find(b)->second;
            });
  return out;
}

std::vector<DeploymentHandle> Registry::LiveHandles() const {
  std::lock_guard lock(mu_);
  std::vector<DeploymentHandle> out;
  for (const auto& [id, d] : live_) out.push_back(d.handle);
  return out;
}

bool Registry::IsLive(const DeploymentHandle& handle) const {
  std::lock_guard lock(mu_);
  auto it = live_.find(handle.handle_id);
  return it != live_.end() && it->second.handle == handle;
}

std::size_t Registry::processor_count() const {
  std::lock_guard lock(mu_);
  return processors_.size();
}

}  // namespace hcflow
