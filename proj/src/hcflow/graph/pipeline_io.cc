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

#include "hcflow/graph/pipeline_io.h"

#include "hcflow/error.h"
#include "hcflow/json_io.h"

namespace hcflow {
namespace {

using nlohmann::json;

const json& ArrayField(const json& doc, std::string_view key) {
  static const json kEmpty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return kEmpty;
  if (!it->is_array()) {
    throw Error(ErrorCode::kParseError,
                "pipeline: \"" + std::string(key) + "\" must be an array");
  }
  return *it;
}

std::vector<PortSpec> ParsePorts(const json& shell, std::string_view key) {
  std::vector<PortSpec> ports;
  for (const auto& p : ArrayField(shell, key)) {
    ports.push_back(PortSpec{RequireString(p, "name", "port"),
                             RequireString(p, "type", "port")});
  }
  return ports;
}

json PortsToJson(const std::vector<PortSpec>& ports) {
  json out = json::array();
  for (const auto& p : ports) {
    out.push_back({{"name", p.name}, {"type", p.datatype}});
  }
  return out;
}

Tag ParseTagField(const json& doc, std::string_view what) {
  std::string text = RequireString(doc, "tag", what);
  try {
    return Tag::Parse(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadTag,
                std::string(what) + ": " + e.message(),
                {{"cause", ErrorCodeName(e.code())}, {"tag", text}});
  }
}

ResourceMap ParseResourceMap(const json& doc, std::string_view key,
                             std::string_view what) {
  ResourceMap out;
  auto it = doc.find(key);
  if (it == doc.end()) return out;
  if (!it->is_object()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": \"" + std::string(key) +
                    "\" must be an object");
  }
  for (const auto& [name, units] : it->items()) {
    if (!units.is_number_integer()) {
      throw Error(ErrorCode::kParseError,
                  std::string(what) + ": units of \"" + name +
                      "\" must be an integer");
    }
    out.emplace(name, units.get<std::int64_t>());
  }
  return out;
}

}  // namespace

Payload ParsePayload(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParseError, "payload must be an object");
  }
  Payload p;
  if (doc.contains("source")) {
    p.kind = Payload::Kind::kSource;
    p.resource = RequireString(doc, "source", "payload");
    return p;
  }
  if (doc.contains("sink")) {
    p.kind = Payload::Kind::kSink;
    p.resource = RequireString(doc, "sink", "payload");
    return p;
  }
  p.op = RequireString(doc, "op", "payload");
  if (doc.contains("blob")) {
    p.kind = Payload::Kind::kConfigBlob;
    p.blob = RequireString(doc, "blob", "payload");
  }
  if (auto it = doc.find("params"); it != doc.end()) {
    if (!it->is_object()) {
      throw Error(ErrorCode::kParseError, "payload params must be an object");
    }
    p.params = *it;
  }
  return p;
}

json PayloadToJson(const Payload& payload) {
  switch (payload.kind) {
    case Payload::Kind::kSource:
      return {{"source", payload.resource}};
    case Payload::Kind::kSink:
      return {{"sink", payload.resource}};
    case Payload::Kind::kConfigBlob:
      return {{"blob", payload.blob},
              {"op", payload.op},
              {"params", payload.params}};
    case Payload::Kind::kOperator:
      break;
  }
  return {{"op", payload.op}, {"params", payload.params}};
}

PipelineDefinition ParsePipeline(const json& doc) {
  CheckSchemaVersion(doc, "pipeline");
  PipelineDefinition def;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string() || !IsValidToken(it->get<std::string>())) {
      throw Error(ErrorCode::kParseError, "pipeline: bad \"id\"");
    }
    def.id = it->get<std::string>();
  }

  for (const auto& s : ArrayField(doc, "shells")) {
    AlgorithmShell shell;
    shell.id = RequireString(s, "id", "shell");
    shell.inputs = ParsePorts(s, "inputs");
    shell.outputs = ParsePorts(s, "outputs");
    def.graph.AddShell(std::move(shell));
  }

  for (const auto& i : ArrayField(doc, "implementations")) {
    AlgorithmImplementation impl{
        .id = RequireString(i, "id", "implementation"),
        .shell_id = RequireString(i, "shell", "implementation"),
        .compat_tag = ParseTagField(i, "implementation"),
        .demand = ParseResourceMap(i, "demand", "implementation"),
        .payload = ParsePayload(RequireField(i, "payload", "implementation")),
    };
    def.graph.RegisterImplementation(std::move(impl));
  }

  for (const auto& e : ArrayField(doc, "edges")) {
    def.graph.Connect(PortRef::Parse(RequireString(e, "from", "edge")),
                      PortRef::Parse(RequireString(e, "to", "edge")));
  }
  for (const auto& b : ArrayField(doc, "sources")) {
    def.graph.BindSource(PortRef::Parse(RequireString(b, "to", "source")),
                         RequireString(b, "resource", "source"));
  }
  for (const auto& b : ArrayField(doc, "sinks")) {
    def.graph.BindSink(PortRef::Parse(RequireString(b, "from", "sink")),
                       RequireString(b, "resource", "sink"));
  }
  return def;
}

json PipelineToJson(const std::string& id, const DataflowGraph& graph) {
  json doc = {{"v", kSchemaVersion}};
  if (!id.empty()) doc["id"] = id;
  json shells = json::array();
  for (const auto& [sid, shell] : graph.shells()) {
    shells.push_back({{"id", sid},
                      {"inputs", PortsToJson(shell.inputs)},
                      {"outputs", PortsToJson(shell.outputs)}});
  }
  json impls = json::array();
  for (const auto& [iid, impl] : graph.implementations()) {
    json demand = json::object();
    for (const auto& [r, u] : impl.demand) demand[r] = u;
    impls.push_back({{"id", iid},
                     {"shell", impl.shell_id},
                     {"tag", impl.compat_tag.ToString()},
                     {"demand", demand},
                     {"payload", PayloadToJson(impl.payload)}});
  }
  json edges = json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"from", e.from.ToString()}, {"to", e.to.ToString()}});
  }
  json sources = json::array();
  for (const auto& b : graph.sources()) {
    sources.push_back({{"to", b.port.ToString()}, {"resource", b.resource}});
  }
  json sinks = json::array();
  for (const auto& b : graph.sinks()) {
    sinks.push_back({{"from", b.port.ToString()}, {"resource", b.resource}});
  }
  doc["shells"] = std::move(shells);
  doc["implementations"] = std::move(impls);
  doc["edges"] = std::move(edges);
  doc["sources"] = std::move(sources);
  doc["sinks"] = std::move(sinks);
  return doc;
}

}  // namespace hcflow
