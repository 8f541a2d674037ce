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

#include "hcflow/matcher/matcher.h"

#include <algorithm>

#include "hcflow/error.h"
#include "hcflow/json_io.h"

namespace hcflow {
namespace {

using nlohmann::json;

void Reserve(ResourceMap& occupancy, const ResourceMap& demand, int sign) {
  for (const auto& [resource, units] : demand) {
    if (units != 0) occupancy[resource] += sign * units;
  }
}

// Shell-specific view of the search space: ordered implementations and, per
// implementation, the set of compatible processor indices.
struct ShellCandidates {
  const AlgorithmShell* shell;
  std::vector<const AlgorithmImplementation*> implementations;
  std::vector<std::vector<bool>> compatible;  // [impl][processor]
};

ShellCandidates BuildCandidates(
    const AlgorithmShell& shell,
    std::span<const AlgorithmImplementation* const> implementations,
    const RegistrySnapshot& snapshot) {
  ShellCandidates c{&shell, OrderImplementations(implementations), {}};
  for (const auto* impl : c.implementations) {
    if (impl->shell_id != shell.id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "implementation \"" + impl->id + "\" belongs to shell \"" +
                      impl->shell_id + "\", not \"" + shell.id + "\"");
    }
    auto ok = snapshot.Compatible(impl->compat_tag);
    std::vector<bool> row;
    row.reserve(snapshot.processors.size());
    for (const auto& p : snapshot.processors) row.push_back(ok.count(p.id) > 0);
    c.compatible.push_back(std::move(row));
  }
  return c;
}

MatchOutcome MatchCandidates(const ShellCandidates& c,
                             const RegistrySnapshot& snapshot) {
  MatchOutcome out;
  for (std::size_t i = 0; i < c.implementations.size(); ++i) {
    const auto* impl = c.implementations[i];
    for (std::size_t p = 0; p < snapshot.processors.size(); ++p) {
      const auto& proc = snapshot.processors[p];
      if (!c.compatible[i][p]) {
        out.rejections.push_back({impl->id, proc.id, RejectReason::kIncompatible});
        continue;
      }
      if (!FitsCapacity(proc.capacity, proc.occupancy, impl->demand)) {
        out.rejections.push_back({impl->id, proc.id, RejectReason::kUndeployable});
        continue;
      }
      out.assignment = Assignment{impl->id, proc.id};
      return out;
    }
  }
  return out;
}

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(std::vector<ShellCandidates> shells, RegistrySnapshot snapshot)
      : shells_(std::move(shells)), snapshot_(std::move(snapshot)) {}

  bool Run() { return Descend(0); }

  const std::map<std::string, Assignment>& assignments() const {
    return assignments_;
  }

 private:
  bool Descend(std::size_t depth) {
    if (depth == shells_.size()) return true;
    const ShellCandidates& c = shells_[depth];
    for (std::size_t i = 0; i < c.implementations.size(); ++i) {
      const auto* impl = c.implementations[i];
      for (std::size_t p = 0; p < snapshot_.processors.size(); ++p) {
        auto& proc = snapshot_.processors[p];
        if (!c.compatible[i][p] ||
            !FitsCapacity(proc.capacity, proc.occupancy, impl->demand)) {
          continue;
        }
        Reserve(proc.occupancy, impl->demand, +1);
        assignments_[c.shell->id] = Assignment{impl->id, proc.id};
        if (Descend(depth + 1)) return true;
        assignments_.erase(c.shell->id);
        Reserve(proc.occupancy, impl->demand, -1);
      }
    }
    return false;
  }

  std::vector<ShellCandidates> shells_;
  RegistrySnapshot snapshot_;
  std::map<std::string, Assignment> assignments_;
};

// When no complete assignment exists, every compatible pair is undeployable
// in combination with the rest of the graph.
InfeasibilityReport ExhaustiveReport(const std::vector<ShellCandidates>& shells,
                                     const RegistrySnapshot& snapshot) {
  InfeasibilityReport report;
  for (const auto& c : shells) {
    auto& rows = report.per_shell[c.shell->id];
    for (std::size_t i = 0; i < c.implementations.size(); ++i) {
      for (std::size_t p = 0; p < snapshot.processors.size(); ++p) {
        rows.push_back({c.implementations[i]->id, snapshot.processors[p].id,
                        c.compatible[i][p] ? RejectReason::kUndeployable
                                           : RejectReason::kIncompatible});
      }
    }
  }
  return report;
}

}  // namespace

std::string_view PlanModeName(PlanMode mode) {
  return mode == PlanMode::kExhaustive ? "exhaustive" : "greedy";
}

PlanMode ParsePlanMode(std::string_view name) {
  if (name == "greedy") return PlanMode::kGreedy;
  if (name == "exhaustive") return PlanMode::kExhaustive;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown plan mode \"" + std::string(name) + "\"");
}

std::string_view RejectReasonName(RejectReason reason) {
  return reason == RejectReason::kIncompatible ? "incompatible"
                                               : "undeployable";
}

std::vector<const AlgorithmImplementation*> OrderImplementations(
    std::span<const AlgorithmImplementation* const> implementations) {
  std::vector<const AlgorithmImplementation*> out(implementations.begin(),
                                                  implementations.end());
  std::sort(out.begin(), out.end(),
            [](const AlgorithmImplementation* a,
               const AlgorithmImplementation* b) {
              if (a->compat_tag.specificity() != b->compat_tag.specificity()) {
                return a->compat_tag.specificity() > b->compat_tag.specificity();
              }
              return a->id < b->id;
            });
  return out;
}

MatchOutcome MatchOne(
    const AlgorithmShell& shell,
    std::span<const AlgorithmImplementation* const> implementations,
    const RegistrySnapshot& processors) {
  return MatchCandidates(BuildCandidates(shell, implementations, processors),
                         processors);
}

DeploymentPlan PlanGraph(const DataflowGraph& graph,
                         const RegistrySnapshot& registry, PlanMode mode) {
  auto violations = ValidateGraph(graph);
  if (!violations.empty()) {
    json detail = json::array();
    for (const auto& v : violations) {
      detail.push_back({{"kind", ViolationKindName(v.kind)},
                        {"shell", v.shell},
                        {"port", v.port}});
    }
    throw Error(ErrorCode::kInvalidGraph,
                "graph has " + std::to_string(violations.size()) +
                    " violation(s)",
                {{"violations", detail}});
  }

  std::vector<ShellCandidates> shells;
  for (const auto& id : TopologicalOrder(graph)) {
    auto impls = graph.ImplementationsOf(id);
    shells.push_back(BuildCandidates(graph.shell(id), impls, registry));
  }

  DeploymentPlan plan;
  plan.mode = mode;

  if (mode == PlanMode::kExhaustive) {
    ExhaustiveSearch search(shells, registry);
    if (search.Run()) {
      plan.complete = true;
      plan.assignments = search.assignments();
    } else {
      plan.report = ExhaustiveReport(shells, registry);
    }
    return plan;
  }

  RegistrySnapshot working = registry;
  for (const auto& c : shells) {
    MatchOutcome m = MatchCandidates(c, working);
    if (!m.assignment) {
      plan.report.per_shell[c.shell->id] = std::move(m.rejections);
      continue;
    }
    for (auto& p : working.processors) {
      if (p.id == m.assignment->processor_id) {
        Reserve(p.occupancy,
                graph.implementation(m.assignment->implementation_id).demand,
                +1);
      }
    }
    plan.assignments[c.shell->id] = *m.assignment;
  }
  plan.complete = plan.report.empty();
  if (!plan.complete) plan.assignments.clear();
  return plan;
}

std::vector<DeploymentHandle> CommitPlan(const DeploymentPlan& plan,
                                         const DataflowGraph& graph,
                                         Registry& registry) {
  if (!plan.complete) {
    throw Error(ErrorCode::kPlanInfeasible, "cannot commit an incomplete plan",
                ReportToJson(plan.report));
  }
  std::vector<DeploymentHandle> handles;
  for (const auto& [shell, a] : plan.assignments) {
    try {
      handles.push_back(
          registry.Deploy(a.processor_id, graph.implementation(a.implementation_id)));
    } catch (const Error& e) {
      for (auto it = handles.rbegin(); it != handles.rend(); ++it) {
        registry.Undeploy(*it);
      }
      throw Error(ErrorCode::kCommitFailed,
                  "deploying " + a.implementation_id + " to " + a.processor_id +
                      " failed: " + e.message(),
                  {{"shell", shell},
                   {"implementation", a.implementation_id},
                   {"processor", a.processor_id},
                   {"cause", ErrorCodeName(e.code())}});
    }
  }
  return handles;
}

json ReportToJson(const InfeasibilityReport& report) {
  json shells = json::object();
  for (const auto& [shell, rows] : report.per_shell) {
    json list = json::array();
    for (const auto& r : rows) {
      list.push_back({{"implementation", r.implementation_id},
                      {"processor", r.processor_id},
                      {"reason", RejectReasonName(r.reason)}});
    }
    shells[shell] = std::move(list);
  }
  return {{"shells", std::move(shells)}};
}

json PlanToJson(const DeploymentPlan& plan) {
  json doc = {{"v", kSchemaVersion},
              {"mode", PlanModeName(plan.mode)},
              {"status", plan.complete ? "complete" : "infeasible"}};
  json assignments = json::object();
  for (const auto& [shell, a] : plan.assignments) {
    assignments[shell] = {{"implementation", a.implementation_id},
                          {"processor", a.processor_id}};
  }
  doc["assignments"] = std::move(assignments);
  if (!plan.complete) doc["report"] = ReportToJson(plan.report);
  return doc;
}

}  // namespace hcflow
