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

// Named data resources for the source-sink backend:
//
//   seq:<a,b,c>   finite in-memory sequence (source only); "seq:" is empty
//   file:<path>   one decimal token per line (source or sink)
//   collect:      in-memory buffer readable through session stats (sink only)

#ifndef HCFLOW_REGISTRY_RESOURCES_H_
#define HCFLOW_REGISTRY_RESOURCES_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcflow/registry/operators.h"
#include "hcflow/value.h"

namespace hcflow {

class Source {
 public:
  virtual ~Source() = default;
  virtual std::optional<Value> Next() = 0;
};

class Sink {
 public:
  virtual ~Sink() = default;
  virtual void Accept(const Value& value) = 0;
  virtual void Close() {}
};

// Thread-safe append-only buffer behind "collect:" sinks.
class CollectBuffer {
 public:
  void Append(Value v) {
    std::lock_guard lock(mu_);
    values_.push_back(std::move(v));
  }
  std::vector<Value> Snapshot() const {
    std::lock_guard lock(mu_);
    return values_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<Value> values_;
};

// Syntax check without touching the filesystem. Throws
// Error{kInvalidArgument}.
void CheckSourceResource(std::string_view resource);
void CheckSinkResource(std::string_view resource);

bool IsCollectResource(std::string_view resource);

// Throws Error{kInvalidArgument}, Error{kIoError} or Error{kParseError}.
std::unique_ptr<Source> OpenSource(std::string_view resource,
                                   std::string_view datatype);

// `collect` receives the values for "collect:" resources and may be null
// otherwise.
std::unique_ptr<Sink> OpenSink(std::string_view resource,
                               std::shared_ptr<CollectBuffer> collect);

// Adapters that let a source-sink processor host a source or sink shell.
std::unique_ptr<Runner> MakeSourceRunner(std::unique_ptr<Source> source);
std::unique_ptr<Runner> MakeSinkRunner(std::unique_ptr<Sink> sink);

}  // namespace hcflow

#endif  // HCFLOW_REGISTRY_RESOURCES_H_
