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

#include "hcflow/registry/resources.h"

#include <fstream>

#include "hcflow/error.h"

namespace hcflow {
namespace {

constexpr std::string_view kSeq = "seq:";
constexpr std::string_view kFile = "file:";
constexpr std::string_view kCollect = "collect:";

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

class SeqSource : public Source {
 public:
  explicit SeqSource(std::vector<Value> values) : values_(std::move(values)) {}
  std::optional<Value> Next() override {
    if (next_ >= values_.size()) return std::nullopt;
    return values_[next_++];
  }

 private:
  std::vector<Value> values_;
  std::size_t next_ = 0;
};

class FileSource : public Source {
 public:
  FileSource(std::string path, std::string datatype)
      : in_(path), datatype_(std::move(datatype)) {
    if (!in_) throw Error(ErrorCode::kIoError, "cannot open " + path);
  }
  std::optional<Value> Next() override {
    std::string line;
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() && datatype_ != kTypeBytes) continue;
      return ParseValue(line, datatype_);
    }
    return std::nullopt;
  }

 private:
  std::ifstream in_;
  std::string datatype_;
};

class FileSink : public Sink {
 public:
  explicit FileSink(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::kIoError, "cannot write " + path);
  }
  void Accept(const Value& v) override { out_ << FormatValue(v) << '\n'; }
  void Close() override { out_.flush(); }

 private:
  std::ofstream out_;
};

class CollectSink : public Sink {
 public:
  explicit CollectSink(std::shared_ptr<CollectBuffer> buffer)
      : buffer_(std::move(buffer)) {}
  void Accept(const Value& v) override { buffer_->Append(v); }

 private:
  std::shared_ptr<CollectBuffer> buffer_;
};

class SourceRunner : public Runner {
 public:
  explicit SourceRunner(std::unique_ptr<Source> source)
      : source_(std::move(source)) {}
  RunnerRole role() const override { return RunnerRole::kSource; }
  std::optional<std::vector<Value>> Fire(std::span<const Value>) override {
    auto v = source_->Next();
    if (!v) return std::nullopt;
    return std::vector<Value>{std::move(*v)};
  }

 private:
  std::unique_ptr<Source> source_;
};

class SinkRunner : public Runner {
 public:
  explicit SinkRunner(std::unique_ptr<Sink> sink) : sink_(std::move(sink)) {}
  ~SinkRunner() override { sink_->Close(); }
  RunnerRole role() const override { return RunnerRole::kSink; }
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    for (const auto& v : inputs) sink_->Accept(v);
    return std::vector<Value>{};
  }

 private:
  std::unique_ptr<Sink> sink_;
};

}  // namespace

void CheckSourceResource(std::string_view resource) {
  if (StartsWith(resource, kSeq)) return;
  if (StartsWith(resource, kFile) && resource.size() > kFile.size()) return;
  throw Error(ErrorCode::kInvalidArgument,
              "not a source resource: \"" + std::string(resource) + "\"");
}

void CheckSinkResource(std::string_view resource) {
  if (StartsWith(resource, kCollect)) return;
  if (StartsWith(resource, kFile) && resource.size() > kFile.size()) return;
  throw Error(ErrorCode::kInvalidArgument,
              "not a sink resource: \"" + std::string(resource) + "\"");
}

bool IsCollectResource(std::string_view resource) {
  return StartsWith(resource, kCollect);
}

std::unique_ptr<Source> OpenSource(std::string_view resource,
                                   std::string_view datatype) {
  CheckSourceResource(resource);
  if (!IsKnownDatatype(datatype)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot source datatype \"" + std::string(datatype) + "\"");
  }
  if (StartsWith(resource, kSeq)) {
    std::string_view list = resource.substr(kSeq.size());
    std::vector<Value> values;
    if (!list.empty()) {
      std::size_t start = 0;
      while (true) {
        auto comma = list.find(',', start);
        values.push_back(ParseValue(list.substr(start, comma == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : comma - start),
                                    datatype));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    return std::make_unique<SeqSource>(std::move(values));
  }
  return std::make_unique<FileSource>(
      std::string(resource.substr(kFile.size())), std::string(datatype));
}

std::unique_ptr<Sink> OpenSink(std::string_view resource,
                               std::shared_ptr<CollectBuffer> collect) {
  CheckSinkResource(resource);
  if (IsCollectResource(resource)) {
    if (!collect) collect = std::make_shared<CollectBuffer>();
    return std::make_unique<CollectSink>(std::move(collect));
  }
  return std::make_unique<FileSink>(std::string(resource.substr(kFile.size())));
}

std::unique_ptr<Runner> MakeSourceRunner(std::unique_ptr<Source> source) {
  return std::make_unique<SourceRunner>(std::move(source));
}

std::unique_ptr<Runner> MakeSinkRunner(std::unique_ptr<Sink> sink) {
  return std::make_unique<SinkRunner>(std::move(sink));
}

}  // namespace hcflow
