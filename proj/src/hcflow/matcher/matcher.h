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

// Placement of shells onto virtual processors.
//
// For every shell the candidates are walked implementations-outer,
// processors-inner: implementations by descending tag specificity (ties by
// id), processors in registration order. The first pair that is both
// compatible (tag ancestry) and deployable (capacity) wins.
//
// Planning never touches live occupancy: it works on a RegistrySnapshot and
// reserves capacity in its own copy. CommitPlan is the only step that
// deploys.

#ifndef HCFLOW_MATCHER_MATCHER_H_
#define HCFLOW_MATCHER_MATCHER_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcflow/graph/graph.h"
#include "hcflow/registry/registry.h"
#include "json.hpp"

namespace hcflow {

enum class PlanMode {
  kGreedy,      // shell by shell in topological order, no backtracking
  kExhaustive,  // backtracking search; complete iff any assignment exists
};

std::string_view PlanModeName(PlanMode mode);
// Accepts "greedy" and "exhaustive". Throws Error{kInvalidArgument}.
PlanMode ParsePlanMode(std::string_view name);

enum class RejectReason { kIncompatible, kUndeployable };

std::string_view RejectReasonName(RejectReason reason);

struct Rejection {
  std::string implementation_id;
  std::string processor_id;
  RejectReason reason;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct InfeasibilityReport {
  // shell id -> rejected pairs, in candidate order
  std::map<std::string, std::vector<Rejection>> per_shell;

  bool empty() const { return per_shell.empty(); }
};

struct Assignment {
  std::string implementation_id;
  std::string processor_id;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct DeploymentPlan {
  PlanMode mode = PlanMode::kGreedy;
  bool complete = false;
  std::map<std::string, Assignment> assignments;  // empty unless complete
  InfeasibilityReport report;                     // empty when complete
};

struct MatchOutcome {
  std::optional<Assignment> assignment;
  std::vector<Rejection> rejections;  // pairs tried before the match
};

// Candidate order: descending specificity, ties by ascending id.
std::vector<const AlgorithmImplementation*> OrderImplementations(
    std::span<const AlgorithmImplementation* const> implementations);

// Runs the compatibility/deployability loop for one shell. When no pair
// matches, `rejections` holds every pair with its reason.
// Throws Error{kInvalidArgument} if an implementation belongs to another
// shell.
MatchOutcome MatchOne(
    const AlgorithmShell& shell,
    std::span<const AlgorithmImplementation* const> implementations,
    const RegistrySnapshot& processors);

// Throws Error{kInvalidGraph} (violations in the detail payload).
DeploymentPlan PlanGraph(const DataflowGraph& graph,
                         const RegistrySnapshot& registry, PlanMode mode);

// Deploys every assignment. On the first failure every handle created so
// far is undeployed and Error{kCommitFailed} is thrown; the registry is then
// back to its pre-call occupancy. An incomplete plan raises
// Error{kPlanInfeasible}.
std::vector<DeploymentHandle> CommitPlan(const DeploymentPlan& plan,
                                         const DataflowGraph& graph,
                                         Registry& registry);

nlohmann::json ReportToJson(const InfeasibilityReport& report);
nlohmann::json PlanToJson(const DeploymentPlan& plan);

}  // namespace hcflow

#endif  // HCFLOW_MATCHER_MATCHER_H_
