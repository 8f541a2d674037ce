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

#include "hcflow/registry/operators.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>

#include "hcflow/error.h"

namespace hcflow {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 7> kCatalog = {
    "identity", "add_const", "scale", "clamp", "sum_window", "tee", "sum"};

std::int64_t WrapAdd(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}

std::int64_t WrapMul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

// A numeric operator constant. Kept in both forms so one runner serves i64
// and f64 streams.
struct Constant {
  std::int64_t i = 0;
  double f = 0;
  bool integral = false;
};

Constant ReadConstant(const json& params, std::string_view op,
                      std::string_view key) {
  auto it = params.find(key);
  if (it == params.end() || !it->is_number()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(op) + ": numeric parameter \"" + std::string(key) +
                    "\" is required");
  }
  Constant c;
  c.integral = it->is_number_integer();
  c.f = it->get<double>();
  c.i = c.integral ? it->get<std::int64_t>() : static_cast<std::int64_t>(c.f);
  return c;
}

[[noreturn]] void Fault(std::string_view op, const Value& v) {
  throw Error(ErrorCode::kOperatorFault,
              std::string(op) + " cannot process value \"" + FormatValue(v) +
                  "\"");
}

void RequireArity(std::string_view op, const RunnerShape& shape,
                  std::size_t inputs, std::size_t outputs) {
  bool ok = (inputs == 0 || shape.input_types.size() == inputs) &&
            (outputs == 0 || shape.output_types.size() == outputs) &&
            !shape.input_types.empty() && !shape.output_types.empty();
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(op) + " does not support " +
                    std::to_string(shape.input_types.size()) + " inputs and " +
                    std::to_string(shape.output_types.size()) + " outputs");
  }
}

class IdentityRunner : public Runner {
 public:
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    return std::vector<Value>{inputs[0]};
  }
};

class TeeRunner : public Runner {
 public:
  explicit TeeRunner(std::size_t fan_out) : fan_out_(fan_out) {}
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    return std::vector<Value>(fan_out_, inputs[0]);
  }

 private:
  std::size_t fan_out_;
};

class AddConstRunner : public Runner {
 public:
  explicit AddConstRunner(Constant k) : k_(k) {}
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    const Value& v = inputs[0];
    if (auto* i = std::get_if<std::int64_t>(&v)) {
      if (!k_.integral) Fault("add_const", v);
      return std::vector<Value>{WrapAdd(*i, k_.i)};
    }
    if (auto* f = std::get_if<double>(&v)) return std::vector<Value>{*f + k_.f};
    Fault("add_const", v);
  }

 private:
  Constant k_;
};

class ScaleRunner : public Runner {
 public:
  explicit ScaleRunner(Constant k) : k_(k) {}
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    const Value& v = inputs[0];
    if (auto* i = std::get_if<std::int64_t>(&v)) {
      if (!k_.integral) Fault("scale", v);
      return std::vector<Value>{WrapMul(*i, k_.i)};
    }
    if (auto* f = std::get_if<double>(&v)) return std::vector<Value>{*f * k_.f};
    Fault("scale", v);
  }

 private:
  Constant k_;
};

class ClampRunner : public Runner {
 public:
  ClampRunner(Constant lo, Constant hi) : lo_(lo), hi_(hi) {}
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    const Value& v = inputs[0];
    if (auto* i = std::get_if<std::int64_t>(&v)) {
      if (!lo_.integral || !hi_.integral) Fault("clamp", v);
      return std::vector<Value>{std::min(std::max(*i, lo_.i), hi_.i)};
    }
    if (auto* f = std::get_if<double>(&v)) {
      return std::vector<Value>{std::min(std::max(*f, lo_.f), hi_.f)};
    }
    Fault("clamp", v);
  }

 private:
  Constant lo_, hi_;
};

class SumWindowRunner : public Runner {
 public:
  explicit SumWindowRunner(std::size_t n) : n_(n) {}
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    const Value& v = inputs[0];
    if (std::holds_alternative<std::string>(v)) Fault("sum_window", v);
    window_.push_back(v);
    if (window_.size() > n_) window_.pop_front();
    // Recomputed from the window so f64 results do not drift.
    if (std::holds_alternative<std::int64_t>(v)) {
      std::int64_t acc = 0;
      for (const auto& w : window_) {
        auto* i = std::get_if<std::int64_t>(&w);
        if (!i) Fault("sum_window", w);
        acc = WrapAdd(acc, *i);
      }
      return std::vector<Value>{acc};
    }
    double acc = 0;
    for (const auto& w : window_) {
      auto* f = std::get_if<double>(&w);
      if (!f) Fault("sum_window", w);
      acc += *f;
    }
    return std::vector<Value>{acc};
  }

 private:
  std::size_t n_;
  std::deque<Value> window_;
};

class SumRunner : public Runner {
 public:
  std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) override {
    if (std::holds_alternative<std::int64_t>(inputs[0])) {
      std::int64_t acc = 0;
      for (const auto& v : inputs) {
        auto* i = std::get_if<std::int64_t>(&v);
        if (!i) Fault("sum", v);
        acc = WrapAdd(acc, *i);
      }
      return std::vector<Value>{acc};
    }
    double acc = 0;
    for (const auto& v : inputs) {
      auto* f = std::get_if<double>(&v);
      if (!f) Fault("sum", v);
      acc += *f;
    }
    return std::vector<Value>{acc};
  }
};

}  // namespace

std::span<const std::string_view> BuiltinOperators() { return kCatalog; }

std::unique_ptr<Runner> MakeOperatorRunner(std::string_view op,
                                           const json& params,
                                           const RunnerShape& shape) {
  const json& p = params.is_object() ? params : json::object();
  if (op == "identity") {
    RequireArity(op, shape, 1, 1);
    return std::make_unique<IdentityRunner>();
  }
  if (op == "add_const") {
    RequireArity(op, shape, 1, 1);
    return std::make_unique<AddConstRunner>(ReadConstant(p, op, "k"));
  }
  if (op == "scale") {
    RequireArity(op, shape, 1, 1);
    return std::make_unique<ScaleRunner>(ReadConstant(p, op, "k"));
  }
  if (op == "clamp") {
    RequireArity(op, shape, 1, 1);
    Constant lo = ReadConstant(p, op, "lo");
    Constant hi = ReadConstant(p, op, "hi");
    if (lo.f > hi.f) {
      throw Error(ErrorCode::kInvalidArgument, "clamp: lo exceeds hi");
    }
    return std::make_unique<ClampRunner>(lo, hi);
  }
  if (op == "sum_window") {
    RequireArity(op, shape, 1, 1);
    Constant n = ReadConstant(p, op, "n");
    if (!n.integral || n.i < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sum_window: n must be a positive integer");
    }
    return std::make_unique<SumWindowRunner>(static_cast<std::size_t>(n.i));
  }
  if (op == "tee") {
    RequireArity(op, shape, 1, 0);
    return std::make_unique<TeeRunner>(shape.output_types.size());
  }
  if (op == "sum") {
    RequireArity(op, shape, 0, 1);
    return std::make_unique<SumRunner>();
  }
  throw Error(ErrorCode::kUnknownOperator,
              "unknown operator \"" + std::string(op) + "\"");
}

}  // namespace hcflow
