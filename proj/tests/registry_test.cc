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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "hcflow/error.h"
#include "hcflow/registry/operators.h"
#include "hcflow/registry/registry.h"
#include "hcflow/registry/resources.h"
#include "support/oracles.h"

namespace hcflow {
namespace {

using nlohmann::json;

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInternal;
}

json Manifest(const std::string& ham, json processors) {
  return {{"v", 1}, {"ham_id", ham}, {"name", ham}, {"processors", processors}};
}

json Proc(const std::string& id, const std::string& tag, json capacity,
          const std::string& kind = "simulated-fpga") {
  return {{"id", id}, {"accept_tag", tag}, {"capacity", capacity},
          {"backend_kind", kind}};
}

AlgorithmImplementation Impl(const std::string& id, const std::string& tag,
                             ResourceMap demand,
                             Payload payload = Payload::Operator("add_const",
                                                                 {{"k", 1}})) {
  return AlgorithmImplementation{id, "shell", ParseTag(tag), std::move(demand),
                                 std::move(payload)};
}

const RunnerShape kUnary{{"i64"}, {"i64"}};

TEST(RegistryTest, LoadsManifestWithZeroOccupancy) {
  Registry r;
  r.LoadHam(ParseHamManifest(
      Manifest("h1", {Proc("P1", "fpga.xilinx.virtex", {{"luts", 100}})})));
  RegistrySnapshot snap = r.Snapshot();
  ASSERT_EQ(snap.processors.size(), 1u);
  EXPECT_EQ(snap.processors[0].id, "P1");
  EXPECT_EQ(snap.processors[0].occupancy, (ResourceMap{{"luts", 0}}));
  EXPECT_EQ(snap.processors[0].backend_kind, BackendKind::kSimulatedFpga);
  json j = ProcessorToJson(snap.processors[0]);
  EXPECT_EQ(j["accept_tag"], "fpga.xilinx.virtex");
  EXPECT_EQ(j["backend_kind"], "simulated-fpga");
}

TEST(RegistryTest, ManifestErrors) {
  Registry r;
  r.LoadHam(ParseHamManifest(Manifest("h1", {Proc("P1", "fpga", {{"luts", 1}})})));
  EXPECT_EQ(CodeOf([&] {
              r.LoadHam(ParseHamManifest(
                  Manifest("h2", {Proc("P1", "cpu", {{"slots", 1}})})));
            }),
            ErrorCode::kDuplicateProcessorId);
  EXPECT_EQ(CodeOf([&] {
              ParseHamManifest(Manifest("h3", {Proc("P9", "fpga..x", {{"luts", 1}})}));
            }),
            ErrorCode::kBadTag);
  EXPECT_EQ(CodeOf([&] {
              ParseHamManifest(
                  Manifest("h4", {Proc("P9", "fpga", {{"luts", 1}}, "gpu-driver")}));
            }),
            ErrorCode::kUnknownBackendKind);
  // A rejected manifest loads nothing.
  EXPECT_EQ(CodeOf([&] {
              r.LoadHam(ParseHamManifest(Manifest(
                  "h5", {Proc("P2", "cpu", {{"slots", 1}}),
                         Proc("P1", "cpu", {{"slots", 1}})})));
            }),
            ErrorCode::kDuplicateProcessorId);
  EXPECT_EQ(r.processor_count(), 1u);
}

TEST(RegistryTest, CanDeployChecksTagAndCapacity) {
  Registry r;
  r.LoadHam(ParseHamManifest(Manifest(
      "h", {Proc("P1", "fpga.xilinx.virtex", {{"luts", 100}}),
            Proc("P2", "cpu.host", {{"slots", 4}}, "host-executor")})));
  auto xcv100 = Impl("I", "fpga.xilinx.virtex.xcv100", {{"luts", 60}});
  EXPECT_TRUE(r.CanDeploy("P1", xcv100));
  r.Deploy("P1", xcv100);
  EXPECT_EQ(r.Occupancy("P1"), (ResourceMap{{"luts", 60}}));
  EXPECT_FALSE(r.CanDeploy("P1", xcv100));
  EXPECT_FALSE(r.CanDeploy("P2", Impl("J", "fpga.xilinx.virtex.xcv100", {})));
  // Demand on a resource the processor lacks is never deployable.
  EXPECT_FALSE(r.CanDeploy("P2", Impl("K", "cpu.host", {{"luts", 1}})));
  EXPECT_TRUE(r.CanDeploy("P2", Impl("K", "cpu.host", {{"slots", 4}})));
  // Side-effect free.
  for (int i = 0; i < 10; ++i) r.CanDeploy("P1", xcv100);
  EXPECT_EQ(r.Occupancy("P1"), (ResourceMap{{"luts", 60}}));
}

TEST(RegistryTest, DeployUndeployConserves) {
  Registry r;
  r.LoadHam(ParseHamManifest(
      Manifest("h", {Proc("P1", "fpga.xilinx.virtex", {{"luts", 100}})})));
  auto impl = Impl("I", "fpga.xilinx.virtex.xcv100", {{"luts", 60}});
  DeploymentHandle h = r.Deploy("P1", impl);
  EXPECT_EQ(h.processor_id, "P1");
  EXPECT_EQ(r.Occupancy("P1"), (ResourceMap{{"luts", 60}}));
  EXPECT_EQ(CodeOf([&] { r.Deploy("P1", impl); }), ErrorCode::kNotDeployable);
  r.Undeploy(h);
  EXPECT_EQ(r.Occupancy("P1"), (ResourceMap{{"luts", 0}}));
  EXPECT_EQ(CodeOf([&] { r.Undeploy(h); }), ErrorCode::kStaleHandle);
  EXPECT_EQ(CodeOf([&] { r.Deploy("P7", impl); }), ErrorCode::kUnknownProcessor);
}

TEST(RegistryTest, RunnersAndReconfigurations) {
  Registry r;
  r.LoadHam(ParseHamManifest(Manifest(
      "h", {Proc("F", "fpga", {{"luts", 100}}),
            Proc("H", "cpu", {{"slots", 4}}, "host-executor")})));
  DeploymentHandle host = r.Deploy("H", Impl("h", "cpu", {{"slots", 1}}));
  auto runner = r.InstantiateRunner(host, kUnary);
  Value in[] = {std::int64_t{41}};
  EXPECT_EQ(runner->Fire(in)->at(0), Value(std::int64_t{42}));

  for (int deploys = 1; deploys <= 3; ++deploys) {
    DeploymentHandle f = r.Deploy("F", Impl("f", "fpga.x", {{"luts", 10}}));
    EXPECT_EQ(r.Snapshot().Find("F")->reconfigurations,
              static_cast<std::uint64_t>(deploys));
    auto fpga = r.InstantiateRunner(f, kUnary);
    EXPECT_EQ(fpga->Fire(in)->at(0), Value(std::int64_t{42}));
    r.Undeploy(f);
    EXPECT_EQ(CodeOf([&] { r.InstantiateRunner(f, kUnary); }),
              ErrorCode::kStaleHandle);
  }
  EXPECT_EQ(r.Snapshot().Find("H")->reconfigurations, 0u);

  DeploymentHandle bad = r.Deploy("H", Impl("x", "cpu", {}, Payload::Operator("fft9000")));
  EXPECT_EQ(CodeOf([&] { r.InstantiateRunner(bad, kUnary); }),
            ErrorCode::kUnknownOperator);
}

TEST(RegistryTest, HostRejectsConfigBlobs) {
  Registry r;
  r.LoadHam(ParseHamManifest(
      Manifest("h", {Proc("H", "cpu", {{"slots", 4}}, "host-executor")})));
  Payload blob = Payload::Operator("identity");
  blob.kind = Payload::Kind::kConfigBlob;
  blob.blob = "AAAA";
  DeploymentHandle h = r.Deploy("H", Impl("b", "cpu", {}, blob));
  EXPECT_EQ(CodeOf([&] { r.InstantiateRunner(h, kUnary); }),
            ErrorCode::kInvalidArgument);
}

TEST(RegistryTest, SourceSinkBackendHostsEndpoints) {
  Registry r;
  r.LoadHam(ParseHamManifest(
      Manifest("h", {Proc("IO", "io", {{"ports", 2}}, "source-sink")})));
  Payload src;
  src.kind = Payload::Kind::kSource;
  src.resource = "seq:5,6";
  DeploymentHandle hs = r.Deploy("IO", Impl("s", "io", {{"ports", 1}}, src));
  auto source = r.InstantiateRunner(hs, RunnerShape{{}, {"i64"}});
  EXPECT_EQ(source->role(), RunnerRole::kSource);
  EXPECT_EQ(source->Fire({})->at(0), Value(std::int64_t{5}));
  EXPECT_EQ(source->Fire({})->at(0), Value(std::int64_t{6}));
  EXPECT_FALSE(source->Fire({}).has_value());

  Payload snk;
  snk.kind = Payload::Kind::kSink;
  snk.resource = "collect:";
  DeploymentHandle hk = r.Deploy("IO", Impl("k", "io", {{"ports", 1}}, snk));
  auto buffer = std::make_shared<CollectBuffer>();
  auto sink = r.InstantiateRunner(hk, RunnerShape{{"i64"}, {}}, buffer);
  Value v[] = {std::int64_t{9}};
  sink->Fire(v);
  EXPECT_EQ(buffer->Snapshot(), (std::vector<Value>{std::int64_t{9}}));
}

TEST(RegistryPropertyTest, CapacityConservation) {
  hcflow_test::Rng rng(31);
  Registry r;
  json procs = json::array();
  for (int k = 0; k < 4; ++k) {
    procs.push_back(Proc("P" + std::to_string(k), k % 2 ? "cpu" : "fpga",
                         {{"a", hcflow_test::Uniform(rng, 0, 10)},
                          {"b", hcflow_test::Uniform(rng, 0, 10)}}));
  }
  r.LoadHam(ParseHamManifest(Manifest("h", procs)));
  std::vector<DeploymentHandle> live;
  for (int step = 0; step < 10000; ++step) {
    if (!live.empty() && hcflow_test::Coin(rng, 0.45)) {
      std::size_t i = static_cast<std::size_t>(
          hcflow_test::Uniform(rng, 0, static_cast<std::int64_t>(live.size()) - 1));
      r.Undeploy(live[i]);
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      std::string pid = "P" + std::to_string(hcflow_test::Uniform(rng, 0, 3));
      ResourceMap demand;
      if (hcflow_test::Coin(rng)) demand["a"] = hcflow_test::Uniform(rng, 0, 4);
      if (hcflow_test::Coin(rng)) demand["b"] = hcflow_test::Uniform(rng, 0, 4);
      auto impl = Impl("i" + std::to_string(step),
                       hcflow_test::Coin(rng) ? "cpu.x" : "fpga.y", demand);
      bool predicted = r.CanDeploy(pid, impl);
      try {
        live.push_back(r.Deploy(pid, impl));
        EXPECT_TRUE(predicted);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kNotDeployable);
        EXPECT_FALSE(predicted);
      }
    }
    // Independent ledger from the live handles.
    std::map<std::string, std::map<std::string, std::int64_t>> expected;
    for (const auto& h : live) {
      for (const auto& [res, d] : h.demand) expected[h.processor_id][res] += d;
    }
    for (const auto& p : r.Snapshot().processors) {
      for (const auto& [res, cap] : p.capacity) {
        std::int64_t occ = p.occupancy.at(res);
        ASSERT_EQ(occ, expected[p.id][res]) << "step " << step;
        ASSERT_LE(occ, cap);
        ASSERT_GE(occ, 0);
      }
    }
  }
  EXPECT_EQ(r.LiveHandles().size(), live.size());
}

// ---- operators --------------------------------------------------------------

std::vector<Value> Drive(Runner& runner, const std::vector<std::vector<Value>>& rows) {
  std::vector<Value> out;
  for (const auto& row : rows) {
    auto fired = runner.Fire(row);
    if (fired) out.insert(out.end(), fired->begin(), fired->end());
  }
  return out;
}

TEST(OperatorTest, Catalog) {
  auto ops = BuiltinOperators();
  EXPECT_EQ(std::vector<std::string_view>(ops.begin(), ops.end()),
            (std::vector<std::string_view>{"identity", "add_const", "scale",
                                           "clamp", "sum_window", "tee", "sum"}));
}

TEST(OperatorTest, ArithmeticOnIntegers) {
  auto i = [](std::int64_t v) { return std::vector<Value>{v}; };
  auto scale = MakeOperatorRunner("scale", {{"k", 2}}, kUnary);
  EXPECT_EQ(Drive(*scale, {i(1), i(-3)}),
            (std::vector<Value>{std::int64_t{2}, std::int64_t{-6}}));
  auto clamp = MakeOperatorRunner("clamp", {{"lo", 0}, {"hi", 3}}, kUnary);
  EXPECT_EQ(Drive(*clamp, {i(-1), i(2), i(7)}),
            (std::vector<Value>{std::int64_t{0}, std::int64_t{2}, std::int64_t{3}}));
  auto window = MakeOperatorRunner("sum_window", {{"n", 2}}, kUnary);
  EXPECT_EQ(Drive(*window, {i(1), i(2), i(3), i(4)}),
            (std::vector<Value>{std::int64_t{1}, std::int64_t{3}, std::int64_t{5},
                                std::int64_t{7}}));
  auto wrap = MakeOperatorRunner("add_const", {{"k", 1}}, kUnary);
  EXPECT_EQ(Drive(*wrap, {i(INT64_MAX)}), (std::vector<Value>{INT64_MIN}));
}

TEST(OperatorTest, FanInAndFanOut) {
  auto tee = MakeOperatorRunner("tee", {}, RunnerShape{{"i64"}, {"i64", "i64", "i64"}});
  Value in[] = {std::int64_t{4}};
  EXPECT_EQ(tee->Fire(in)->size(), 3u);
  auto sum = MakeOperatorRunner("sum", {}, RunnerShape{{"i64", "i64"}, {"i64"}});
  Value pair[] = {std::int64_t{11}, std::int64_t{12}};
  EXPECT_EQ(sum->Fire(pair)->at(0), Value(std::int64_t{23}));
}

TEST(OperatorTest, FloatsAndFaults) {
  RunnerShape f64{{"f64"}, {"f64"}};
  auto scale = MakeOperatorRunner("scale", {{"k", 0.5}}, f64);
  Value x[] = {3.0};
  EXPECT_EQ(scale->Fire(x)->at(0), Value(1.5));
  auto int_scale = MakeOperatorRunner("scale", {{"k", 0.5}}, kUnary);
  Value n[] = {std::int64_t{3}};
  EXPECT_EQ(CodeOf([&] { int_scale->Fire(n); }), ErrorCode::kOperatorFault);
  Value s[] = {std::string("text")};
  auto add = MakeOperatorRunner("add_const", {{"k", 1}}, kUnary);
  EXPECT_EQ(CodeOf([&] { add->Fire(s); }), ErrorCode::kOperatorFault);
}

TEST(OperatorTest, ParameterErrors) {
  EXPECT_EQ(CodeOf([&] { MakeOperatorRunner("fft9000", {}, kUnary); }),
            ErrorCode::kUnknownOperator);
  EXPECT_EQ(CodeOf([&] { MakeOperatorRunner("add_const", json::object(), kUnary); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { MakeOperatorRunner("clamp", {{"lo", 2}, {"hi", 1}}, kUnary); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { MakeOperatorRunner("sum_window", {{"n", 0}}, kUnary); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] {
              MakeOperatorRunner("identity", {}, RunnerShape{{"i64", "i64"}, {"i64"}});
            }),
            ErrorCode::kInvalidArgument);
}

// Host and simulated-FPGA runners produce the same streams.
TEST(OperatorPropertyTest, BackendEquivalence) {
  hcflow_test::Rng rng(32);
  Registry r;
  r.LoadHam(ParseHamManifest(Manifest(
      "h", {Proc("H", "cpu", {{"slots", 100}}, "host-executor"),
            Proc("F", "fpga", {{"slots", 100}}, "simulated-fpga")})));
  struct Case {
    std::string op;
    json params;
    std::size_t ins, outs;
  };
  std::vector<Case> cases = {{"identity", {}, 1, 1},
                             {"add_const", {{"k", -7}}, 1, 1},
                             {"scale", {{"k", 3}}, 1, 1},
                             {"clamp", {{"lo", -50}, {"hi", 50}}, 1, 1},
                             {"sum_window", {{"n", 3}}, 1, 1},
                             {"tee", {}, 1, 2},
                             {"sum", {}, 3, 1}};
  for (const auto& c : cases) {
    RunnerShape shape{std::vector<std::string>(c.ins, "i64"),
                      std::vector<std::string>(c.outs, "i64")};
    Payload op = Payload::Operator(c.op, c.params);
    Payload blob = op;
    blob.kind = Payload::Kind::kConfigBlob;
    blob.blob = "image";
    auto hh = r.Deploy("H", Impl("h_" + c.op, "cpu", {{"slots", 1}}, op));
    auto fh = r.Deploy("F", Impl("f_" + c.op, "fpga", {{"slots", 1}}, blob));
    auto host = r.InstantiateRunner(hh, shape);
    auto fpga = r.InstantiateRunner(fh, shape);
    std::vector<std::vector<Value>> rows;
    for (int t = 0; t < 1000; ++t) {
      std::vector<Value> row;
      for (std::size_t k = 0; k < c.ins; ++k) {
        row.push_back(hcflow_test::Uniform(rng, -1000000, 1000000));
      }
      rows.push_back(row);
    }
    EXPECT_EQ(Drive(*host, rows), Drive(*fpga, rows)) << c.op;
  }
}

// ---- resources --------------------------------------------------------------

TEST(ResourceTest, SeqAndFileEndpoints) {
  auto seq = OpenSource("seq:1.5,2", "f64");
  EXPECT_EQ(seq->Next(), Value(1.5));
  EXPECT_EQ(seq->Next(), Value(2.0));
  EXPECT_FALSE(seq->Next().has_value());
  EXPECT_FALSE(OpenSource("seq:", "i64")->Next().has_value());

  std::string path = ::testing::TempDir() + "hcflow_resource_test.txt";
  {
    auto sink = OpenSink("file:" + path, nullptr);
    sink->Accept(std::int64_t{3});
    sink->Accept(std::int64_t{4});
    sink->Close();
  }
  auto file = OpenSource("file:" + path, "i64");
  EXPECT_EQ(file->Next(), Value(std::int64_t{3}));
  EXPECT_EQ(file->Next(), Value(std::int64_t{4}));
  EXPECT_FALSE(file->Next().has_value());
  std::remove(path.c_str());

  EXPECT_EQ(CodeOf([&] { OpenSource("tcp:1234", "i64"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { OpenSource("seq:1,x", "i64"); }), ErrorCode::kParseError);
}

}  // namespace
}  // namespace hcflow
