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

// Shells, their implementations and the dataflow graph that wires shells
// together. A shell is the processor-independent contract (ports and
// datatypes); each implementation realizes it for one kind of processor.

#ifndef HCFLOW_GRAPH_GRAPH_H_
#define HCFLOW_GRAPH_GRAPH_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcflow/taxonomy/tag.h"
#include "json.hpp"

namespace hcflow {

// Identifier alphabet for shells, ports, implementations and processors.
bool IsValidToken(std::string_view token);

using ResourceMap = std::map<std::string, std::int64_t, std::less<>>;

enum class PortDirection { kInput, kOutput };

struct PortSpec {
  std::string name;
  std::string datatype;
};

struct AlgorithmShell {
  std::string id;
  std::vector<PortSpec> inputs;
  std::vector<PortSpec> outputs;
  // Maintained by DataflowGraph::RegisterImplementation.
  std::vector<std::string> implementation_ids;

  const PortSpec* FindPort(std::string_view name, PortDirection dir) const;
};

// What a deployed implementation actually does.
struct Payload {
  enum class Kind {
    kOperator,    // built-in operator evaluated on the host
    kConfigBlob,  // configuration image for a (simulated) FPGA; names the
                  // operator it implements
    kSource,      // producer bound to a resource, e.g. "seq:1,2,3"
    kSink,        // consumer bound to a resource, e.g. "collect:"
  };

  Kind kind = Kind::kOperator;
  std::string op;
  nlohmann::json params = nlohmann::json::object();
  std::string blob;
  std::string resource;

  static Payload Operator(std::string op, nlohmann::json params = {});
};

struct AlgorithmImplementation {
  std::string id;
  std::string shell_id;
  Tag compat_tag;
  ResourceMap demand;
  Payload payload;
};

struct PortRef {
  std::string shell;
  std::string port;

  std::string ToString() const { return shell + "." + port; }
  // "shell.port"; throws Error{kParseError}.
  static PortRef Parse(std::string_view text);

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct Edge {
  PortRef from;  // output port
  PortRef to;    // input port
};

// A source feeding an otherwise unconnected input, or a sink draining an
// output.
struct ExternalBinding {
  PortRef port;
  std::string resource;
};

class DataflowGraph {
 public:
  // Throws kDuplicateId, kInvalidArgument (bad token, no ports, repeated
  // port name). Any implementation_ids on `shell` are discarded.
  void AddShell(AlgorithmShell shell);

  // Throws kDuplicateId, kUnknownShell, kInvalidArgument.
  void RegisterImplementation(AlgorithmImplementation implementation);

  // Throws kUnknownShell, kUnknownPort, kDirectionMismatch, kTypeMismatch,
  // kInputAlreadyBound, kOutputAlreadyConnected.
  void Connect(const PortRef& from, const PortRef& to);

  // Throws kUnknownShell, kUnknownPort, kDirectionMismatch,
  // kInputAlreadyBound.
  void BindSource(const PortRef& input, std::string resource);

  // Throws kUnknownShell, kUnknownPort, kDirectionMismatch,
  // kOutputAlreadyConnected (second sink on the same output).
  void BindSink(const PortRef& output, std::string resource);

  const std::map<std::string, AlgorithmShell, std::less<>>& shells() const {
    return shells_;
  }
  const std::map<std::string, AlgorithmImplementation, std::less<>>&
  implementations() const {
    return implementations_;
  }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<ExternalBinding>& sources() const { return sources_; }
  const std::vector<ExternalBinding>& sinks() const { return sinks_; }

  // Throw kUnknownShell / kUnknownId.
  const AlgorithmShell& shell(std::string_view id) const;
  const AlgorithmImplementation& implementation(std::string_view id) const;

  std::vector<const AlgorithmImplementation*> ImplementationsOf(
      std::string_view shell_id) const;

  // Producer of an input port, if any.
  std::optional<PortRef> ProducerOf(const PortRef& input) const;
  const ExternalBinding* SourceOf(const PortRef& input) const;
  std::optional<PortRef> ConsumerOf(const PortRef& output) const;
  const ExternalBinding* SinkOf(const PortRef& output) const;

 private:
  const PortSpec& ResolvePort(const PortRef& ref, PortDirection dir) const;

  std::map<std::string, AlgorithmShell, std::less<>> shells_;
  std::map<std::string, AlgorithmImplementation, std::less<>> implementations_;
  std::vector<Edge> edges_;
  std::vector<ExternalBinding> sources_;
  std::vector<ExternalBinding> sinks_;
};

enum class ViolationKind {
  kUnboundInput,
  kCycleDetected,
  kShellWithoutImplementations,
  kTypeMismatch,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string shell;
  std::string port;  // empty for shell-level violations
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Structural checks. Empty result means the graph is runnable. Ordered by
// shell id, then port name, then kind.
std::vector<Violation> ValidateGraph(const DataflowGraph& graph);

// Outputs with neither a consumer edge nor a sink, as "shell.port".
std::vector<std::string> UnconsumedOutputs(const DataflowGraph& graph);

// Kahn's algorithm; ready shells are released in ascending id order so the
// result is unique. Throws Error{kCycleDetected}.
std::vector<std::string> TopologicalOrder(const DataflowGraph& graph);

}  // namespace hcflow

#endif  // HCFLOW_GRAPH_GRAPH_H_
