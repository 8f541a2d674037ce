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

#include "hcflow/error.h"
#include "hcflow/matcher/matcher.h"
#include "support/oracles.h"

namespace hcflow {
namespace {

using hcflow_test::BruteForceFeasible;
using hcflow_test::BuildChainGraph;
using hcflow_test::BuildManifest;
using hcflow_test::CheckPlanSound;
using hcflow_test::MatchInstance;

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

// One shell with a Virtex implementation and a host one.
MatchInstance TwoImplementations() {
  MatchInstance inst;
  inst.shells = {{{"fpga.xilinx.virtex.xcv100", {{"luts", 60}}},
                  {"cpu.host", {{"slots", 1}}}}};
  inst.processors = {{"fpga.xilinx.virtex", {{"luts", 100}}},
                     {"cpu.host", {{"slots", 4}}}};
  return inst;
}

MatchOutcome MatchFirstShell(const DataflowGraph& g, const RegistrySnapshot& snap) {
  auto impls = g.ImplementationsOf("S0");
  return MatchOne(g.shell("S0"), impls, snap);
}

TEST(MatcherTest, PrefersMostSpecificImplementation) {
  MatchInstance inst = TwoImplementations();
  DataflowGraph g = BuildChainGraph(inst);
  Registry r;
  r.LoadHam(BuildManifest(inst));
  MatchOutcome m = MatchFirstShell(g, r.Snapshot());
  ASSERT_TRUE(m.assignment.has_value());
  EXPECT_EQ(*m.assignment, (Assignment{"S0_I0", "P0"}));
}

TEST(MatcherTest, FallsBackWhenCapacityIsShort) {
  MatchInstance inst = TwoImplementations();
  DataflowGraph g = BuildChainGraph(inst);
  Registry r;
  r.LoadHam(BuildManifest(inst));
  r.Deploy("P0", AlgorithmImplementation{"other", "x", ParseTag("fpga.xilinx.virtex"),
                                         {{"luts", 90}}, Payload::Operator("identity")});
  MatchOutcome m = MatchFirstShell(g, r.Snapshot());
  ASSERT_TRUE(m.assignment.has_value());
  EXPECT_EQ(*m.assignment, (Assignment{"S0_I1", "P1"}));
  EXPECT_EQ(m.rejections.front(),
            (Rejection{"S0_I0", "P0", RejectReason::kUndeployable}));
}

TEST(MatcherTest, IncompatibleTagIsReported) {
  MatchInstance inst;
  inst.shells = {{{"fpga.xilinx.virtex.xcv100", {{"luts", 1}}}}};
  inst.processors = {{"fpga.xilinx.virtex.revb", {{"luts", 100}}}};
  DataflowGraph g = BuildChainGraph(inst);
  Registry r;
  r.LoadHam(BuildManifest(inst));
  for (PlanMode mode : {PlanMode::kGreedy, PlanMode::kExhaustive}) {
    DeploymentPlan plan = PlanGraph(g, r.Snapshot(), mode);
    EXPECT_FALSE(plan.complete);
    ASSERT_EQ(plan.report.per_shell.count("S0"), 1u);
    EXPECT_EQ(plan.report.per_shell.at("S0"),
              (std::vector<Rejection>{{"S0_I0", "P0", RejectReason::kIncompatible}}));
    auto j = PlanToJson(plan);
    EXPECT_EQ(j["status"], "infeasible");
    EXPECT_EQ(j["report"]["shells"]["S0"][0]["reason"], "incompatible");
  }
}

TEST(MatcherTest, AmpleCapacityPlansEveryShell) {
  MatchInstance inst;
  inst.shells = {{{"cpu", {{"slots", 1}}}}, {{"cpu.x", {{"slots", 1}}}}};
  inst.processors = {{"cpu", {{"slots", 8}}}};
  Registry r;
  r.LoadHam(BuildManifest(inst));
  DeploymentPlan plan = PlanGraph(BuildChainGraph(inst), r.Snapshot(), PlanMode::kGreedy);
  EXPECT_EQ(CheckPlanSound(plan, inst), "");
  EXPECT_TRUE(BruteForceFeasible(inst));
}

// Greedy places S0 on P0 through its more specific implementation and strands
// S1; the backtracking search moves S0 to P1.
MatchInstance Adversarial() {
  MatchInstance inst;
  inst.shells = {{{"cpu.x86", {{"slots", 1}}}, {"fpga", {{"slots", 1}}}},
                 {{"cpu", {{"slots", 1}}}}};
  inst.processors = {{"cpu", {{"slots", 1}}}, {"fpga", {{"slots", 1}}}};
  return inst;
}

TEST(MatcherTest, AdversarialInstanceSeparatesModes) {
  MatchInstance inst = Adversarial();
  ASSERT_TRUE(BruteForceFeasible(inst));
  Registry r;
  r.LoadHam(BuildManifest(inst));
  DataflowGraph g = BuildChainGraph(inst);
  DeploymentPlan greedy = PlanGraph(g, r.Snapshot(), PlanMode::kGreedy);
  EXPECT_FALSE(greedy.complete);
  EXPECT_TRUE(greedy.assignments.empty());
  EXPECT_EQ(greedy.report.per_shell.count("S1"), 1u);
  DeploymentPlan exhaustive = PlanGraph(g, r.Snapshot(), PlanMode::kExhaustive);
  EXPECT_EQ(CheckPlanSound(exhaustive, inst), "");
  EXPECT_EQ(exhaustive.assignments.at("S0"), (Assignment{"S0_I1", "P1"}));
  EXPECT_EQ(exhaustive.assignments.at("S1"), (Assignment{"S1_I0", "P0"}));
}

TEST(MatcherTest, InvalidGraphRejected) {
  DataflowGraph g;
  g.AddShell(AlgorithmShell{"S1", {{"in", "i64"}}, {{"out", "i64"}}, {}});
  g.BindSource({"S1", "in"}, "seq:1");
  Registry r;
  try {
    PlanGraph(g, r.Snapshot(), PlanMode::kGreedy);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidGraph);
    EXPECT_EQ(e.detail()["violations"][0]["kind"], "ShellWithoutImplementations");
  }
}

TEST(MatcherTest, CommitAddsExactDemands) {
  MatchInstance inst;
  inst.shells = {{{"cpu", {{"slots", 2}}}}, {{"fpga", {{"luts", 30}}}}};
  inst.processors = {{"cpu", {{"slots", 4}}}, {"fpga", {{"luts", 100}}}};
  Registry r;
  r.LoadHam(BuildManifest(inst));
  DataflowGraph g = BuildChainGraph(inst);
  DeploymentPlan plan = PlanGraph(g, r.Snapshot(), PlanMode::kGreedy);
  auto handles = CommitPlan(plan, g, r);
  EXPECT_EQ(handles.size(), 2u);
  EXPECT_EQ(r.Occupancy("P0"), (ResourceMap{{"slots", 2}}));
  EXPECT_EQ(r.Occupancy("P1"), (ResourceMap{{"luts", 30}}));
}

TEST(MatcherTest, CommitEmptyPlan) {
  DataflowGraph g;
  Registry r;
  r.LoadHam(BuildManifest(TwoImplementations()));
  DeploymentPlan plan = PlanGraph(g, r.Snapshot(), PlanMode::kGreedy);
  EXPECT_TRUE(plan.complete);
  EXPECT_TRUE(CommitPlan(plan, g, r).empty());
  EXPECT_TRUE(r.LiveHandles().empty());
}

TEST(MatcherTest, CommitFailureRollsBack) {
  MatchInstance inst;
  inst.shells = {{{"cpu", {{"slots", 1}}}}, {{"fpga", {{"luts", 60}}}}};
  inst.processors = {{"cpu", {{"slots", 4}}}, {"fpga", {{"luts", 100}}}};
  Registry r;
  r.LoadHam(BuildManifest(inst));
  DataflowGraph g = BuildChainGraph(inst);
  DeploymentPlan plan = PlanGraph(g, r.Snapshot(), PlanMode::kGreedy);
  // The plan was made on a snapshot; capacity disappears before the second
  // deploy is attempted.
  r.Deploy("P1", AlgorithmImplementation{"intruder", "x", ParseTag("fpga"),
                                          {{"luts", 50}}, Payload::Operator("identity")});
  auto before = r.Snapshot();
  try {
    CommitPlan(plan, g, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCommitFailed);
    EXPECT_EQ(e.detail()["shell"], "S1");
  }
  auto after = r.Snapshot();
  for (std::size_t k = 0; k < before.processors.size(); ++k) {
    EXPECT_EQ(before.processors[k].occupancy, after.processors[k].occupancy);
  }
  EXPECT_EQ(r.LiveHandles().size(), 1u);
}

TEST(MatcherTest, IncompletePlanCannotBeCommitted) {
  MatchInstance inst = Adversarial();
  Registry r;
  r.LoadHam(BuildManifest(inst));
  DataflowGraph g = BuildChainGraph(inst);
  DeploymentPlan greedy = PlanGraph(g, r.Snapshot(), PlanMode::kGreedy);
  EXPECT_EQ(CodeOf([&] { CommitPlan(greedy, g, r); }), ErrorCode::kPlanInfeasible);
}

TEST(MatcherPropertyTest, SoundCompleteAndDeterministic) {
  hcflow_test::Rng rng(41);
  int feasible = 0;
  for (int round = 0; round < 3000; ++round) {
    MatchInstance inst = hcflow_test::RandomMatchInstance(rng, 4, 3, 4);
    Registry r;
    r.LoadHam(BuildManifest(inst));
    DataflowGraph g = BuildChainGraph(inst);
    RegistrySnapshot snap = r.Snapshot();
    bool oracle = BruteForceFeasible(inst);
    feasible += oracle;
    DeploymentPlan exhaustive = PlanGraph(g, snap, PlanMode::kExhaustive);
    DeploymentPlan greedy = PlanGraph(g, snap, PlanMode::kGreedy);
    ASSERT_EQ(exhaustive.complete, oracle) << "round " << round;
    if (exhaustive.complete) ASSERT_EQ(CheckPlanSound(exhaustive, inst), "");
    if (greedy.complete) {
      ASSERT_EQ(CheckPlanSound(greedy, inst), "") << "round " << round;
      ASSERT_TRUE(exhaustive.complete);
    }
    if (hcflow_test::IsUncontended(inst)) {
      ASSERT_EQ(greedy.complete, oracle) << "round " << round;
    }
    DeploymentPlan again = PlanGraph(g, snap, PlanMode::kGreedy);
    ASSERT_EQ(PlanToJson(again), PlanToJson(greedy));
  }
  // The generator must produce both outcomes for the comparison to mean much.
  EXPECT_GT(feasible, 300);
  EXPECT_LT(feasible, 2700);
}

}  // namespace
}  // namespace hcflow
