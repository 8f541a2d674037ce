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

#include "hcflow/graph/graph.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "hcflow/error.h"

namespace hcflow {
namespace {

std::string Quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

void CheckUniquePortNames(const AlgorithmShell& shell,
                          const std::vector<PortSpec>& ports) {
  std::set<std::string_view> seen;
  for (const auto& p : ports) {
    if (!IsValidToken(p.name)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad port name " + Quote(p.name) + " on shell " +
                      Quote(shell.id));
    }
    if (!IsValidToken(p.datatype)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad datatype " + Quote(p.datatype) + " on " +
                      Quote(shell.id + "." + p.name));
    }
    if (!seen.insert(p.name).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "port " + Quote(p.name) + " repeated on shell " +
                      Quote(shell.id));
    }
  }
}

// Shell-level adjacency derived from edges; targets are sorted and unique.
std::map<std::string, std::set<std::string>> Successors(
    const DataflowGraph& graph) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& [id, shell] : graph.shells()) succ[id];
  for (const auto& e : graph.edges()) succ[e.from.shell].insert(e.to.shell);
  return succ;
}

}  // namespace

bool IsValidToken(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

const PortSpec* AlgorithmShell::FindPort(std::string_view name,
                                         PortDirection dir) const {
  const auto& ports = dir == PortDirection::kInput ? inputs : outputs;
  for (const auto& p : ports) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Payload Payload::Operator(std::string op, nlohmann::json params) {
  Payload p;
  p.kind = Kind::kOperator;
  p.op = std::move(op);
  p.params = params.is_null() ? nlohmann::json::object() : std::move(params);
  return p;
}

PortRef PortRef::Parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size() ||
      text.find('.', dot + 1) != std::string_view::npos) {
    throw Error(ErrorCode::kParseError,
                "expected \"shell.port\", got " + Quote(text));
  }
  return PortRef{std::string(text.substr(0, dot)),
                 std::string(text.substr(dot + 1))};
}

void DataflowGraph::AddShell(AlgorithmShell shell) {
  if (!IsValidToken(shell.id)) {
    throw Error(ErrorCode::kInvalidArgument, "bad shell id " + Quote(shell.id));
  }
  if (shells_.count(shell.id)) {
    throw Error(ErrorCode::kDuplicateId, "shell " + Quote(shell.id) +
                                             " already exists");
  }
  if (shell.inputs.empty() && shell.outputs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "shell " + Quote(shell.id) + " declares no ports");
  }
  CheckUniquePortNames(shell, shell.inputs);
  CheckUniquePortNames(shell, shell.outputs);
  shell.implementation_ids.clear();
  std::string id = shell.id;
  shells_.emplace(std::move(id), std::move(shell));
}

void DataflowGraph::RegisterImplementation(
    AlgorithmImplementation implementation) {
  if (!IsValidToken(implementation.id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad implementation id " + Quote(implementation.id));
  }
  if (implementations_.count(implementation.id)) {
    throw Error(ErrorCode::kDuplicateId, "implementation " +
                                             Quote(implementation.id) +
                                             " already exists");
  }
  auto shell = shells_.find(implementation.shell_id);
  if (shell == shells_.end()) {
    throw Error(ErrorCode::kUnknownShell,
                "implementation " + Quote(implementation.id) +
                    " refers to unknown shell " +
                    Quote(implementation.shell_id));
  }
  for (const auto& [resource, units] : implementation.demand) {
    if (!IsValidToken(resource) || units < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad demand entry " + Quote(resource) +
                      " on implementation " + Quote(implementation.id));
    }
  }
  shell->second.implementation_ids.push_back(implementation.id);
  std::string id = implementation.id;
  implementations_.emplace(std::move(id), std::move(implementation));
}

const PortSpec& DataflowGraph::ResolvePort(const PortRef& ref,
                                           PortDirection dir) const {
  auto it = shells_.find(ref.shell);
  if (it == shells_.end()) {
    throw Error(ErrorCode::kUnknownShell, "unknown shell " + Quote(ref.shell));
  }
  if (const PortSpec* p = it->second.FindPort(ref.port, dir)) return *p;
  PortDirection other = dir == PortDirection::kInput ? PortDirection::kOutput
                                                     : PortDirection::kInput;
  if (it->second.FindPort(ref.port, other)) {
    throw Error(ErrorCode::kDirectionMismatch,
                Quote(ref.ToString()) + " is an " +
                    (dir == PortDirection::kInput ? "output" : "input") +
                    " port");
  }
  throw Error(ErrorCode::kUnknownPort, "unknown port " + Quote(ref.ToString()));
}

void DataflowGraph::Connect(const PortRef& from, const PortRef& to) {
  const PortSpec& out = ResolvePort(from, PortDirection::kOutput);
  const PortSpec& in = ResolvePort(to, PortDirection::kInput);
  if (out.datatype != in.datatype) {
    throw Error(ErrorCode::kTypeMismatch,
                Quote(from.ToString()) + " carries " + out.datatype + " but " +
                    Quote(to.ToString()) + " expects " + in.datatype);
  }
  if (ProducerOf(to) || SourceOf(to)) {
    throw Error(ErrorCode::kInputAlreadyBound,
                Quote(to.ToString()) + " already has a producer");
  }
  if (ConsumerOf(from)) {
    throw Error(ErrorCode::kOutputAlreadyConnected,
                Quote(from.ToString()) +
                    " already has a consumer; use a tee shell to fan out");
  }
  edges_.push_back(Edge{from, to});
}

void DataflowGraph::BindSource(const PortRef& input, std::string resource) {
  ResolvePort(input, PortDirection::kInput);
  if (ProducerOf(input) || SourceOf(input)) {
    throw Error(ErrorCode::kInputAlreadyBound,
                Quote(input.ToString()) + " already has a producer");
  }
  sources_.push_back(ExternalBinding{input, std::move(resource)});
}

void DataflowGraph::BindSink(const PortRef& output, std::string resource) {
  ResolvePort(output, PortDirection::kOutput);
  if (SinkOf(output)) {
    throw Error(ErrorCode::kOutputAlreadyConnected,
                Quote(output.ToString()) + " already has a sink");
  }
  sinks_.push_back(ExternalBinding{output, std::move(resource)});
}

const AlgorithmShell& DataflowGraph::shell(std::string_view id) const {
  auto it = shells_.find(id);
  if (it == shells_.end()) {
    throw Error(ErrorCode::kUnknownShell, "unknown shell " + Quote(id));
  }
  return it->second;
}

const AlgorithmImplementation& DataflowGraph::implementation(
    std::string_view id) const {
  auto it = implementations_.find(id);
  if (it == implementations_.end()) {
    throw Error(ErrorCode::kUnknownId, "unknown implementation " + Quote(id));
  }
  return it->second;
}

std::vector<const AlgorithmImplementation*> DataflowGraph::ImplementationsOf(
    std::string_view shell_id) const {
  std::vector<const AlgorithmImplementation*> out;
  for (const auto& id : shell(shell_id).implementation_ids) {
    out.push_back(&implementations_.at(id));
  }
  return out;
}

std::optional<PortRef> DataflowGraph::ProducerOf(const PortRef& input) const {
  for (const auto& e : edges_) {
    if (e.to == input) return e.from;
  }
  return std::nullopt;
}

const ExternalBinding* DataflowGraph::SourceOf(const PortRef& input) const {
  for (const auto& b : sources_) {
    if (b.port == input) return &b;
  }
  return nullptr;
}

std::optional<PortRef> DataflowGraph::ConsumerOf(const PortRef& output) const {
  for (const auto& e : edges_) {
    if (e.from == output) return e.to;
  }
  return std::nullopt;
}

const ExternalBinding* DataflowGraph::SinkOf(const PortRef& output) const {
  for (const auto& b : sinks_) {
    if (b.port == output) return &b;
  }
  return nullptr;
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kUnboundInput: return "UnboundInput";
    case ViolationKind::kCycleDetected: return "CycleDetected";
    case ViolationKind::kShellWithoutImplementations:
      return "ShellWithoutImplementations";
    case ViolationKind::kTypeMismatch: return "TypeMismatch";
  }
  return "Unknown";
}

std::vector<Violation> ValidateGraph(const DataflowGraph& graph) {
  std::vector<Violation> out;

  for (const auto& [id, shell] : graph.shells()) {
    if (shell.implementation_ids.empty()) {
      out.push_back({ViolationKind::kShellWithoutImplementations, id, "",
                     "shell has no implementations"});
    }
    for (const auto& in : shell.inputs) {
      PortRef ref{id, in.name};
      if (!graph.ProducerOf(ref) && !graph.SourceOf(ref)) {
        out.push_back({ViolationKind::kUnboundInput, id, in.name,
                       "input has no producer"});
      }
    }
  }

  for (const auto& e : graph.edges()) {
    const PortSpec* out_port =
        graph.shell(e.from.shell).FindPort(e.from.port, PortDirection::kOutput);
    const PortSpec* in_port =
        graph.shell(e.to.shell).FindPort(e.to.port, PortDirection::kInput);
    if (out_port && in_port && out_port->datatype != in_port->datatype) {
      out.push_back({ViolationKind::kTypeMismatch, e.to.shell, e.to.port,
                     "fed " + out_port->datatype + " from " +
                         e.from.ToString()});
    }
  }

  // A shell lies on a cycle iff it can reach itself.
  auto succ = Successors(graph);
  for (const auto& [id, next] : succ) {
    std::set<std::string> seen;
    std::vector<std::string> stack(next.begin(), next.end());
    bool cyclic = false;
    while (!stack.empty() && !cyclic) {
      std::string cur = std::move(stack.back());
      stack.pop_back();
      if (cur == id) {
        cyclic = true;
      } else if (seen.insert(cur).second) {
        for (const auto& n : succ[cur]) stack.push_back(n);
      }
    }
    if (cyclic) {
      out.push_back({ViolationKind::kCycleDetected, id, "",
                     "shell lies on a cycle"});
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::tie(a.shell, a.port, a.kind) <
                            std::tie(b.shell, b.port, b.kind);
                   });
  return out;
}

std::vector<std::string> UnconsumedOutputs(const DataflowGraph& graph) {
  std::vector<std::string> out;
  for (const auto& [id, shell] : graph.shells()) {
    for (const auto& p : shell.outputs) {
      PortRef ref{id, p.name};
      if (!graph.ConsumerOf(ref) && !graph.SinkOf(ref)) {
        out.push_back(ref.ToString());
      }
    }
  }
  return out;
}

std::vector<std::string> TopologicalOrder(const DataflowGraph& graph) {
  auto succ = Successors(graph);
  std::map<std::string, int> indegree;
  for (const auto& [id, next] : succ) indegree[id];
  for (const auto& [id, next] : succ) {
    for (const auto& n : next) ++indegree[n];
  }
  std::set<std::string> ready;
  for (const auto& [id, d] : indegree) {
    if (d == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string cur = *ready.begin();
    ready.erase(ready.begin());
    for (const auto& n : succ[cur]) {
      if (--indegree[n] == 0) ready.insert(n);
    }
    order.push_back(std::move(cur));
  }
  if (order.size() != succ.size()) {
    throw Error(ErrorCode::kCycleDetected, "graph contains a cycle");
  }
  return order;
}

}  // namespace hcflow
