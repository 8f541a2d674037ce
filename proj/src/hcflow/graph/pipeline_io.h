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

// Pipeline definition files. Schema (all keys stable):
//
//   {
//     "v": 1,                        optional
//     "id": "demo",                  optional
//     "shells": [{"id": "inc",
//                 "inputs":  [{"name": "in",  "type": "i64"}],
//                 "outputs": [{"name": "out", "type": "i64"}]}],
//     "implementations": [{"id": "inc_host", "shell": "inc",
//                          "tag": "cpu.host", "demand": {"slots": 1},
//                          "payload": {"op": "add_const",
//                                      "params": {"k": 1}}}],
//     "edges":   [{"from": "inc.out", "to": "dbl.in"}],
//     "sources": [{"to": "inc.in", "resource": "seq:1,2,3"}],
//     "sinks":   [{"from": "dbl.out", "resource": "collect:"}]
//   }
//
// Payload forms: {"op", "params"}; {"blob", "op", "params"};
// {"source": resource}; {"sink": resource}.

#ifndef HCFLOW_GRAPH_PIPELINE_IO_H_
#define HCFLOW_GRAPH_PIPELINE_IO_H_

#include <string>

#include "hcflow/graph/graph.h"
#include "json.hpp"

namespace hcflow {

struct PipelineDefinition {
  std::string id;  // empty when the document does not name itself
  DataflowGraph graph;
};

// Builds the graph through the DataflowGraph mutators, so every structural
// error they raise propagates unchanged. Schema problems raise kParseError;
// malformed tags raise kBadTag.
PipelineDefinition ParsePipeline(const nlohmann::json& doc);

nlohmann::json PayloadToJson(const Payload& payload);
Payload ParsePayload(const nlohmann::json& doc);

nlohmann::json PipelineToJson(const std::string& id,
                              const DataflowGraph& graph);

}  // namespace hcflow

#endif  // HCFLOW_GRAPH_PIPELINE_IO_H_
