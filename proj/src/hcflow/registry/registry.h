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

// Hardware abstraction modules (HAMs) and the virtual processors they
// publish. Each processor carries an accept tag and a per-resource capacity
// ledger; deploying an implementation charges its demand against the ledger
// and undeploying refunds it.
//
// HAM manifest schema:
//
//   {
//     "v": 1,
//     "ham_id": "board0",
//     "name": "Virtex PCI board",
//     "processors": [{"id": "P1", "accept_tag": "fpga.xilinx.virtex",
//                     "capacity": {"luts": 100},
//                     "backend_kind": "simulated-fpga",
//                     "backend_params": {"reconfig_delay_ms": 0}}]
//   }

#ifndef HCFLOW_REGISTRY_REGISTRY_H_
#define HCFLOW_REGISTRY_REGISTRY_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hcflow/graph/graph.h"
#include "hcflow/registry/operators.h"
#include "hcflow/registry/resources.h"
#include "hcflow/taxonomy/tag.h"
#include "hcflow/taxonomy/tag_index.h"
#include "json.hpp"

namespace hcflow {

enum class BackendKind { kHostExecutor, kSimulatedFpga, kSourceSink };

std::string_view BackendKindName(BackendKind kind);
// Throws Error{kUnknownBackendKind}.
BackendKind ParseBackendKind(std::string_view name);

struct ProcessorSpec {
  std::string id;
  Tag accept_tag;
  ResourceMap capacity;
  BackendKind backend_kind;
  nlohmann::json backend_params = nlohmann::json::object();
};

struct HamManifest {
  std::string ham_id;
  std::string name;
  std::vector<ProcessorSpec> processors;
};

// Throws kParseError, kBadTag, kUnknownBackendKind.
HamManifest ParseHamManifest(const nlohmann::json& doc);

struct DeploymentHandle {
  std::string handle_id;
  std::string processor_id;
  std::string implementation_id;
  ResourceMap demand;

  friend bool operator==(const DeploymentHandle&,
                         const DeploymentHandle&) = default;
};

struct ProcessorSnapshot {
  std::string id;
  std::string ham_id;
  Tag accept_tag;
  ResourceMap capacity;
  ResourceMap occupancy;
  BackendKind backend_kind;
  std::uint64_t reconfigurations = 0;
  std::size_t live_deployments = 0;
};

// Point-in-time copy of every processor, in registration order.
struct RegistrySnapshot {
  std::vector<ProcessorSnapshot> processors;
  // Accept-tag index over `processors`; may be null for hand-built
  // snapshots, in which case lookups fall back to a linear scan.
  std::shared_ptr<const TagIndex> index;

  const ProcessorSnapshot* Find(std::string_view id) const;

  // Ids of processors whose accept tag is ancestor-or-equal to `tag`.
  std::set<std::string> Compatible(const Tag& tag) const;
};

// occupancy[r] + demand[r] <= capacity[r] for every demanded resource;
// resources missing from `capacity` have capacity 0.
bool FitsCapacity(const ResourceMap& capacity, const ResourceMap& occupancy,
                  const ResourceMap& demand);

// Compatibility and deployability against a snapshot. Pure.
bool CanDeploy(const ProcessorSnapshot& processor,
               const AlgorithmImplementation& implementation);

nlohmann::json ProcessorToJson(const ProcessorSnapshot& p);

// Thread-safe. Deploy and Undeploy are linearizable and Deploy checks and
// charges capacity under one lock.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  // All-or-nothing. Throws kDuplicateProcessorId.
  void LoadHam(const HamManifest& manifest);

  // Throws kUnknownProcessor.
  bool CanDeploy(std::string_view processor_id,
                 const AlgorithmImplementation& implementation) const;

  // Throws kUnknownProcessor, kNotDeployable.
  DeploymentHandle Deploy(std::string_view processor_id,
                          const AlgorithmImplementation& implementation);

  // Throws kStaleHandle.
  void Undeploy(const DeploymentHandle& handle);

  // Builds the executable form of a live deployment. `collect` backs
  // "collect:" sinks hosted on source-sink processors.
  // Throws kStaleHandle, kUnknownOperator, kInvalidArgument.
  std::unique_ptr<Runner> InstantiateRunner(
      const DeploymentHandle& handle, const RunnerShape& shape,
      std::shared_ptr<CollectBuffer> collect = nullptr) const;

  RegistrySnapshot Snapshot() const;

  // Throws kUnknownProcessor.
  ResourceMap Occupancy(std::string_view processor_id) const;

  // Ancestor-or-equal processors for an implementation tag, in
  // registration order.
  std::vector<std::string> CompatibleProcessors(const Tag& tag) const;

  std::vector<DeploymentHandle> LiveHandles() const;
  bool IsLive(const DeploymentHandle& handle) const;
  std::size_t processor_count() const;

 private:
  struct ProcessorState {
    ProcessorSnapshot info;
    nlohmann::json backend_params;
  };
  struct LiveDeployment {
    DeploymentHandle handle;
    Payload payload;
  };

  ProcessorState& FindLocked(std::string_view id);
  const ProcessorState& FindLocked(std::string_view id) const;

  mutable std::mutex mu_;
  std::vector<ProcessorState> processors_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  // Rebuilt on every LoadHam and shared read-only with snapshots.
  std::shared_ptr<const TagIndex> index_ = std::make_shared<TagIndex>();
  std::map<std::string, LiveDeployment, std::less<>> live_;
  std::uint64_t next_handle_ = 1;
};

}  // namespace hcflow

#endif  // HCFLOW_REGISTRY_REGISTRY_H_
