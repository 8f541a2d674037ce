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

#include <atomic>
#include <chrono>
#include <thread>

#include "hcflow/error.h"
#include "hcflow/runtime/channel.h"
#include "hcflow/runtime/session.h"
#include "support/oracles.h"

namespace hcflow {
namespace {

using namespace std::chrono_literals;
using nlohmann::json;

constexpr auto kWatchdog = 10s;

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

TEST(ChannelTest, BoundedPutBlocksUntilGet) {
  Channel<int> ch(2);
  ch.Put(1);
  ch.Put(2);
  std::atomic<bool> third_done{false};
  std::thread producer([&] {
    ch.Put(3);
    third_done = true;
  });
  std::this_thread::sleep_for(50ms);
  EXPECT_FALSE(third_done);
  EXPECT_LE(ch.size(), 2u);
  EXPECT_EQ(ch.Get(), 1);
  producer.join();
  EXPECT_TRUE(third_done);
  EXPECT_EQ(ch.Get(), 2);
  EXPECT_EQ(ch.Get(), 3);
}

TEST(ChannelTest, CloseDrainsThenEndsStream) {
  Channel<int> ch(4);
  ch.Put(1);
  ch.Close();
  EXPECT_EQ(ch.Get(), 1);
  EXPECT_EQ(ch.Get(), std::nullopt);
  EXPECT_EQ(CodeOf([&] { ch.Put(2); }), ErrorCode::kPutAfterClose);
}

TEST(ChannelTest, CloseWakesBlockedProducer) {
  Channel<int> ch(1);
  ch.Put(1);
  std::atomic<int> code{0};
  std::thread producer([&] {
    try {
      ch.Put(2);
    } catch (const Error& e) {
      code = static_cast<int>(e.code());
    }
  });
  std::this_thread::sleep_for(20ms);
  ch.Close();
  producer.join();
  EXPECT_EQ(code, static_cast<int>(ErrorCode::kPutAfterClose));
}

TEST(ChannelTest, DiscardDropsAndUnblocks) {
  Channel<int> ch(1);
  ch.Put(1);
  std::thread producer([&] {
    for (int i = 0; i < 100; ++i) ch.Put(i);
  });
  std::this_thread::sleep_for(20ms);
  ch.Discard();
  producer.join();
  EXPECT_EQ(ch.size(), 0u);
  EXPECT_EQ(ch.put_count(), 101u);
  EXPECT_EQ(ch.get_count(), 101u);
}

TEST(ChannelTest, ZeroCapacityRejected) {
  EXPECT_EQ(CodeOf([] { Channel<int> ch(0); }), ErrorCode::kInvalidArgument);
}

TEST(ChannelPropertyTest, ExactlyOnceInOrder) {
  for (std::size_t cap : {1u, 3u, 64u}) {
    Channel<Token> ch(cap);
    constexpr int kCount = 5000;
    std::thread producer([&] {
      for (int i = 0; i < kCount; ++i) {
        ch.Put(Token{std::int64_t{i}, static_cast<std::uint64_t>(i)});
        ASSERT_LE(ch.size(), cap);
      }
      ch.Close();
    });
    std::uint64_t expected = 0;
    while (auto t = ch.Get()) {
      ASSERT_EQ(t->seq, expected);
      ASSERT_EQ(std::get<std::int64_t>(t->payload), static_cast<std::int64_t>(expected));
      ++expected;
    }
    producer.join();
    EXPECT_EQ(expected, static_cast<std::uint64_t>(kCount));
    EXPECT_EQ(ch.put_count(), ch.get_count());
  }
}

HamManifest LocalHam() {
  return ParseHamManifest({{"v", 1},
                           {"ham_id", "local"},
                           {"processors",
                            {{{"id", "cpu0"},
                              {"accept_tag", "cpu"},
                              {"backend_kind", "host-executor"},
                              {"capacity", {{"cores", 64}}}},
                             {{"id", "fpga0"},
                              {"accept_tag", "fpga"},
                              {"backend_kind", "simulated-fpga"},
                              {"capacity", {{"luts", 100000}}}}}}});
}

AlgorithmShell Unary(const std::string& id) {
  return AlgorithmShell{id, {{"in", "i64"}}, {{"out", "i64"}}, {}};
}

void AddOp(DataflowGraph& g, const std::string& shell, const std::string& op,
           json params = json::object()) {
  g.RegisterImplementation(AlgorithmImplementation{
      shell + "_host", shell, ParseTag("cpu"), {{"cores", 1}},
      Payload::Operator(op, params)});
}

DataflowGraph Demo(const std::string& source = "seq:1,2,3") {
  DataflowGraph g;
  g.AddShell(Unary("inc"));
  g.AddShell(Unary("dbl"));
  AddOp(g, "inc", "add_const", {{"k", 1}});
  AddOp(g, "dbl", "scale", {{"k", 2}});
  g.Connect({"inc", "out"}, {"dbl", "in"});
  g.BindSource({"inc", "in"}, source);
  g.BindSink({"dbl", "out"}, "collect:");
  return g;
}

std::vector<Value> Ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(x);
  return out;
}

TEST(SessionTest, DemoPipeline) {
  Registry r;
  r.LoadHam(LocalHam());
  auto before = r.Snapshot();
  std::vector<std::pair<SessionState, SessionState>> transitions;
  std::mutex mu;
  auto s = StartRun("s1", Demo(), r, {}, [&](const std::string&, SessionState a, SessionState b) {
    std::lock_guard lock(mu);
    transitions.emplace_back(a, b);
  });
  ASSERT_TRUE(s->WaitForCompletion(kWatchdog));
  SessionStats stats = s->Stats();
  EXPECT_EQ(stats.state, SessionState::kStopped);
  EXPECT_EQ(stats.sink_outputs.at("dbl.out"), Ints({4, 6, 8}));
  EXPECT_EQ(stats.sink_outputs.at("dbl.out"), hcflow_test::ReferenceRun(Demo()).at("dbl.out"));
  for (const auto& [edge, n] : stats.tokens_per_edge) EXPECT_EQ(n, 3u) << edge;
  EXPECT_EQ(stats.processed_per_shell.at("inc"), 3u);
  EXPECT_EQ(stats.processed_per_shell.at("dbl"), 3u);
  auto after = r.Snapshot();
  for (std::size_t k = 0; k < before.processors.size(); ++k) {
    EXPECT_EQ(before.processors[k].occupancy, after.processors[k].occupancy);
  }
  // Stop after completion returns the final stats.
  EXPECT_EQ(s->Stop().sink_outputs, stats.sink_outputs);
  std::lock_guard lock(mu);
  EXPECT_EQ(transitions,
            (std::vector<std::pair<SessionState, SessionState>>{
                {SessionState::kCreated, SessionState::kRunning},
                {SessionState::kRunning, SessionState::kStopping},
                {SessionState::kStopping, SessionState::kStopped}}));
}

TEST(SessionTest, EmptySource) {
  Registry r;
  r.LoadHam(LocalHam());
  DataflowGraph g;
  g.AddShell(Unary("id"));
  AddOp(g, "id", "identity");
  g.BindSource({"id", "in"}, "seq:");
  g.BindSink({"id", "out"}, "collect:");
  auto s = StartRun("s", g, r);
  ASSERT_TRUE(s->WaitForCompletion(kWatchdog));
  SessionStats stats = s->Stats();
  EXPECT_EQ(stats.state, SessionState::kStopped);
  EXPECT_TRUE(stats.sink_outputs.at("id.out").empty());
  for (const auto& [edge, n] : stats.tokens_per_edge) EXPECT_EQ(n, 0u);
  EXPECT_EQ(stats.processed_per_shell.at("id"), 0u);
}

TEST(SessionTest, DiamondWithTeeAndSum) {
  Registry r;
  r.LoadHam(LocalHam());
  DataflowGraph g;
  g.AddShell(AlgorithmShell{"split", {{"in", "i64"}}, {{"a", "i64"}, {"b", "i64"}}, {}});
  g.AddShell(Unary("p1"));
  g.AddShell(Unary("p2"));
  g.AddShell(AlgorithmShell{"join", {{"a", "i64"}, {"b", "i64"}}, {{"out", "i64"}}, {}});
  AddOp(g, "split", "tee");
  AddOp(g, "p1", "add_const", {{"k", 1}});
  AddOp(g, "p2", "add_const", {{"k", 2}});
  AddOp(g, "join", "sum");
  g.Connect({"split", "a"}, {"p1", "in"});
  g.Connect({"split", "b"}, {"p2", "in"});
  g.Connect({"p1", "out"}, {"join", "a"});
  g.Connect({"p2", "out"}, {"join", "b"});
  g.BindSource({"split", "in"}, "seq:10");
  g.BindSink({"join", "out"}, "collect:");
  auto s = StartRun("s", g, r);
  ASSERT_TRUE(s->WaitForCompletion(kWatchdog));
  EXPECT_EQ(s->Stats().sink_outputs.at("join.out"), Ints({23}));
  EXPECT_EQ(hcflow_test::ReferenceRun(g).at("join.out"), Ints({23}));
}

// A short stream ends a three-input sum while a tee still feeds its two
// other inputs. The sum must not wait on one tee branch while the tee is
// blocked on the other.
TEST(SessionTest, ShortInputDoesNotStallSharedProducer) {
  Registry r;
  r.LoadHam(LocalHam());
  DataflowGraph g;
  g.AddShell(AlgorithmShell{"split", {{"in", "i64"}}, {{"a", "i64"}, {"b", "i64"}}, {}});
  g.AddShell(AlgorithmShell{
      "join", {{"x", "i64"}, {"a", "i64"}, {"b", "i64"}}, {{"out", "i64"}}, {}});
  AddOp(g, "split", "tee");
  AddOp(g, "join", "sum");
  g.Connect({"split", "a"}, {"join", "a"});
  g.Connect({"split", "b"}, {"join", "b"});
  std::string longer = "seq:1";
  for (int i = 2; i <= 50; ++i) longer += "," + std::to_string(i);
  g.BindSource({"split", "in"}, longer);
  g.BindSource({"join", "x"}, "seq:100,200");
  g.BindSink({"join", "out"}, "collect:");
  auto s = StartRun("s", g, r, RunOptions{PlanMode::kGreedy, 1});
  ASSERT_TRUE(s->WaitForCompletion(kWatchdog));
  SessionStats stats = s->Stats();
  EXPECT_EQ(stats.state, SessionState::kStopped);
  EXPECT_EQ(stats.sink_outputs.at("join.out"), Ints({102, 204}));
  for (const auto& [edge, n] : stats.tokens_per_edge) {
    EXPECT_EQ(n, stats.produced_per_edge.at(edge)) << edge;
  }
}

TEST(SessionTest, StopRequiresStartedSession) {
  RunSession s("s", Demo());
  EXPECT_EQ(CodeOf([&] { s.Stop(); }), ErrorCode::kInvalidState);
  EXPECT_EQ(s.Stats().state, SessionState::kCreated);
}

TEST(SessionTest, InfeasiblePlanFailsStart) {
  Registry r;  // no processors at all
  RunSession s("s", Demo());
  try {
    s.Start(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlanInfeasible);
    EXPECT_TRUE(e.detail().contains("shells"));
  }
  EXPECT_EQ(s.state(), SessionState::kFailed);
  EXPECT_EQ(CodeOf([&] { s.Stop(); }), ErrorCode::kInvalidState);
}

TEST(SessionTest, OperatorFaultFailsSessionAndReleases) {
  Registry r;
  r.LoadHam(LocalHam());
  DataflowGraph g;
  g.AddShell(Unary("bad"));
  // A fractional constant cannot be applied to integers.
  AddOp(g, "bad", "scale", {{"k", 0.5}});
  g.BindSource({"bad", "in"}, "seq:1,2,3");
  g.BindSink({"bad", "out"}, "collect:");
  auto s = StartRun("s", g, r);
  ASSERT_TRUE(s->WaitForCompletion(kWatchdog));
  SessionStats stats = s->Stats();
  EXPECT_EQ(stats.state, SessionState::kFailed);
  EXPECT_NE(stats.failure.find("scale"), std::string::npos);
  EXPECT_TRUE(r.LiveHandles().empty());
}

TEST(SessionTest, StopMidRunAndMonotonicStats) {
  Registry r;
  r.LoadHam(LocalHam());
  std::string seq = "seq:";
  for (int i = 0; i < 200000; ++i) seq += (i ? "," : "") + std::to_string(i % 97);
  auto s = StartRun("s", Demo(seq), r, RunOptions{PlanMode::kGreedy, 4});
  std::this_thread::sleep_for(5ms);
  SessionStats mid = s->Stats();
  SessionStats end = s->Stop();
  EXPECT_EQ(end.state, SessionState::kStopped);
  for (const auto& [edge, n] : mid.tokens_per_edge) {
    EXPECT_GE(end.tokens_per_edge.at(edge), n) << edge;
  }
  for (const auto& [edge, n] : end.tokens_per_edge) {
    EXPECT_EQ(n, end.produced_per_edge.at(edge)) << edge;
  }
  // Whatever made it through is a prefix of the full answer.
  const auto& got = end.sink_outputs.at("dbl.out");
  for (std::size_t i = 0; i < got.size(); ++i) {
    ASSERT_EQ(got[i], Value(static_cast<std::int64_t>((i % 97 + 1) * 2)));
  }
  EXPECT_TRUE(r.LiveHandles().empty());
}

TEST(SessionTest, BackpressureWithSmallChannels) {
  Registry r;
  r.LoadHam(LocalHam());
  std::string seq = "seq:";
  for (int i = 0; i < 500; ++i) seq += (i ? "," : "") + std::to_string(i);
  auto s = StartRun("s", Demo(seq), r, RunOptions{PlanMode::kGreedy, 1});
  ASSERT_TRUE(s->WaitForCompletion(kWatchdog));
  const auto& got = s->Stats().sink_outputs.at("dbl.out");
  ASSERT_EQ(got.size(), 500u);
  EXPECT_EQ(got.back(), Value(std::int64_t{1000}));
}

TEST(SessionPropertyTest, RandomDagsMatchReference) {
  hcflow_test::Rng rng(51);
  for (int round = 0; round < 40; ++round) {
    DataflowGraph g = hcflow_test::RandomDag(rng, 10, 300, round % 2 == 1);
    Registry r;
    r.LoadHam(LocalHam());
    auto expected = hcflow_test::ReferenceRun(g);
    auto s = StartRun("s", g, r, RunOptions{
                                     round % 3 ? PlanMode::kGreedy : PlanMode::kExhaustive,
                                     static_cast<std::size_t>(1 + round % 8)});
    ASSERT_TRUE(s->WaitForCompletion(kWatchdog)) << "round " << round;
    SessionStats stats = s->Stats();
    ASSERT_EQ(stats.state, SessionState::kStopped) << stats.failure;
    ASSERT_EQ(stats.sink_outputs.size(), expected.size());
    for (const auto& [port, values] : expected) {
      ASSERT_EQ(stats.sink_outputs.at(port), values)
          << "round " << round << " port " << port;
    }
    for (const auto& [edge, n] : stats.tokens_per_edge) {
      ASSERT_EQ(n, stats.produced_per_edge.at(edge)) << edge;
    }
    EXPECT_TRUE(r.LiveHandles().empty());
  }
}

}  // namespace
}  // namespace hcflow
